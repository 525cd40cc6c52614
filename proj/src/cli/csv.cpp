#include "edgepart/cli/csv.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace edgepart::cli {

std::string format_number(double v)
{
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                   std::chars_format::general, 9);
    if (ec != std::errc())
        throw std::runtime_error("format_number: conversion failed");
    return std::string(buf.data(), ptr);
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points)
{
    out << kSweepHeader << '\n';
    for (const auto& p : points) {
        const double cols[] = {p.rho_mean, p.t_prop,  p.t_dou,  p.t_doe,  p.gain_dou,
                               p.gain_doe, p.ci_prop, p.ci_dou, p.ci_doe, p.dou_fraction};
        for (double c : cols)
            out << format_number(c) << ',';
        out << p.flagged_trials << '\n';
    }
}

namespace {

std::vector<std::string_view> split(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    for (;;) {
        const auto comma = line.find(',', pos);
        out.push_back(line.substr(pos, comma - pos));
        if (comma == std::string_view::npos)
            return out;
        pos = comma + 1;
    }
}

} // namespace

std::vector<SweepPoint> read_sweep_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("csv: empty input");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();

    const auto header = split(line);
    const auto expected = split(kSweepHeader);
    std::array<int, 11> col{};
    for (std::size_t k = 0; k < expected.size(); ++k) {
        col[k] = -1;
        for (std::size_t h = 0; h < header.size(); ++h)
            if (header[h] == expected[k])
                col[k] = static_cast<int>(h);
        if (col[k] < 0)
            throw std::runtime_error("csv: missing column `" + std::string(expected[k]) + "`");
    }

    std::vector<SweepPoint> points;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        const auto fields = split(line);
        if (fields.size() != header.size())
            throw std::runtime_error("csv line " + std::to_string(lineno) + ": expected " +
                                     std::to_string(header.size()) + " fields");
        double v[11];
        for (std::size_t k = 0; k < 11; ++k) {
            const auto f = fields[static_cast<std::size_t>(col[k])];
            auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v[k]);
            if (f.empty() || ec != std::errc() || ptr != f.data() + f.size())
                throw std::runtime_error("csv line " + std::to_string(lineno) + ": bad number `" +
                                         std::string(f) + "`");
        }
        SweepPoint p;
        p.rho_mean = v[0];
        p.t_prop = v[1];
        p.t_dou = v[2];
        p.t_doe = v[3];
        p.gain_dou = v[4];
        p.gain_doe = v[5];
        p.ci_prop = v[6];
        p.ci_dou = v[7];
        p.ci_doe = v[8];
        p.dou_fraction = v[9];
        p.flagged_trials = static_cast<int>(v[10]);
        points.push_back(p);
    }
    return points;
}

} // namespace edgepart::cli
