#pragma once

#include "edgepart/model.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>

namespace edgepart::cli {

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line)
    {}

    int line() const { return line_; }

private:
    int line_;
};

// Instance file grammar, one `key = value` per line, `#` comments:
//
//   n_rb = 100
//   f_p_total = 2.5e10
//   f_s_total = 2.5e10[, ...]     one value per secondary ES
//   rb_bandwidth_hz = 180e3       optional
//   mcs_table = table.txt         optional, used by snr_p
//   ue.<i>.b / .alpha / .R        required
//   ue.<i>.beta                   optional; all or none (uniform 1/M)
//   ue.<i>.snr_p | ue.<i>.r_p     one of
//   ue.<i>.rho | ue.<i>.r_s       one of; comma list per secondary ES
//
// UE indices are 0-based and contiguous.
Instance parse_instance(std::istream& in, const std::string& base_dir = ".");
Instance load_instance(const std::string& path);

} // namespace edgepart::cli
