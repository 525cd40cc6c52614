#include "edgepart/cli/config_file.hpp"

#include "edgepart/channel.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>

namespace edgepart::cli {

namespace {

std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_number(std::string_view s, int line, std::string_view key)
{
    s = trim(s);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw ParseError(line, "expected a number for `" + std::string(key) + "`, got `" +
                                   std::string(s) + "`");
    return v;
}

std::vector<double> to_list(std::string_view s, int line, std::string_view key)
{
    std::vector<double> out;
    std::size_t pos = 0;
    for (;;) {
        const auto comma = s.find(',', pos);
        out.push_back(to_number(s.substr(pos, comma - pos), line, key));
        if (comma == std::string_view::npos)
            break;
        pos = comma + 1;
    }
    return out;
}

struct Value {
    std::string text;
    int line = 0;
};

struct UeFields {
    std::map<std::string, Value> fields;
};

} // namespace

Instance parse_instance(std::istream& in, const std::string& base_dir)
{
    std::map<std::string, Value> sys;
    std::map<long, UeFields> ues;
    static const std::map<std::string, bool> system_keys{
        {"n_rb", true}, {"f_p_total", true}, {"f_s_total", true},
        {"rb_bandwidth_hz", false}, {"mcs_table", false}};
    static const char* ue_keys[] = {"b", "alpha", "beta", "snr_p", "r_p", "rho", "r_s", "R"};

    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string_view line(raw);
        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ParseError(lineno, "expected `key = value`");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty() || value.empty())
            throw ParseError(lineno, "expected `key = value`");

        if (key.rfind("ue.", 0) == 0) {
            const auto dot = key.find('.', 3);
            if (dot == std::string::npos)
                throw ParseError(lineno, "expected `ue.<index>.<field>`");
            const std::string_view idx_text(key.data() + 3, dot - 3);
            long idx = -1;
            auto [ptr, ec] = std::from_chars(idx_text.data(), idx_text.data() + idx_text.size(), idx);
            if (idx_text.empty() || ec != std::errc() || ptr != idx_text.data() + idx_text.size() || idx < 0)
                throw ParseError(lineno, "bad UE index in `" + key + "`");
            const std::string field = key.substr(dot + 1);
            bool known = false;
            for (const char* k : ue_keys)
                known = known || field == k;
            if (!known)
                throw ParseError(lineno, "unknown UE field `" + field + "`");
            if (!ues[idx].fields.emplace(field, Value{value, lineno}).second)
                throw ParseError(lineno, "duplicate key `" + key + "`");
        } else {
            if (!system_keys.count(key))
                throw ParseError(lineno, "unknown key `" + key + "`");
            if (!sys.emplace(key, Value{value, lineno}).second)
                throw ParseError(lineno, "duplicate key `" + key + "`");
        }
    }

    for (const auto& [key, required] : system_keys)
        if (required && !sys.count(key))
            throw ParseError(lineno, "missing required key `" + key + "`");
    if (ues.empty())
        throw ParseError(lineno, "no UEs defined (expected `ue.0.*` keys)");

    Instance inst;
    auto& s = inst.system;
    {
        const auto& v = sys.at("n_rb");
        const double n = to_number(v.text, v.line, "n_rb");
        if (n != static_cast<double>(static_cast<int>(n)))
            throw ParseError(v.line, "n_rb must be an integer");
        s.n_rb = static_cast<int>(n);
    }
    s.f_p_total = to_number(sys.at("f_p_total").text, sys.at("f_p_total").line, "f_p_total");
    s.f_s_total = to_list(sys.at("f_s_total").text, sys.at("f_s_total").line, "f_s_total");
    s.num_secondary = static_cast<int>(s.f_s_total.size());
    if (auto it = sys.find("rb_bandwidth_hz"); it != sys.end())
        s.rb_bandwidth_hz = to_number(it->second.text, it->second.line, "rb_bandwidth_hz");
    McsTable table = default_mcs_table();
    if (auto it = sys.find("mcs_table"); it != sys.end()) {
        std::filesystem::path p(it->second.text);
        if (p.is_relative())
            p = std::filesystem::path(base_dir) / p;
        try {
            table = load_mcs_table(p.string());
        } catch (const ValidationError& e) {
            throw ParseError(it->second.line, e.what());
        }
    }

    long expected = 0;
    int beta_count = 0;
    for (const auto& [idx, ue] : ues) {
        const int first_line = ue.fields.begin()->second.line;
        if (idx != expected)
            throw ParseError(first_line, "UE indices must be contiguous from 0 (missing ue." +
                                             std::to_string(expected) + ")");
        ++expected;
        const auto name = "ue." + std::to_string(idx) + ".";
        auto get = [&](const char* f) -> const Value* {
            auto it = ue.fields.find(f);
            return it == ue.fields.end() ? nullptr : &it->second;
        };
        auto need = [&](const char* f) -> const Value& {
            if (const Value* v = get(f))
                return *v;
            throw ParseError(first_line, "missing `" + name + f + "`");
        };
        auto one_of = [&](const char* a, const char* b) -> std::pair<const char*, const Value*> {
            const Value* va = get(a);
            const Value* vb = get(b);
            if (va && vb)
                throw ParseError(std::max(va->line, vb->line), "give only one of `" + name + a + "` and `" + name + b + "`");
            if (!va && !vb)
                throw ParseError(first_line, "missing `" + name + a + "` or `" + name + b + "`");
            return va ? std::pair{a, va} : std::pair{b, vb};
        };

        TaskSpec t;
        t.b = to_number(need("b").text, need("b").line, "b");
        t.alpha = to_number(need("alpha").text, need("alpha").line, "alpha");
        if (const Value* v = get("beta")) {
            t.beta = to_number(v->text, v->line, "beta");
            ++beta_count;
        }

        ChannelState c;
        c.big_r = to_number(need("R").text, need("R").line, "R");
        const auto [pk, pv] = one_of("snr_p", "r_p");
        const double pnum = to_number(pv->text, pv->line, pk);
        c.r_p = std::string_view(pk) == "snr_p" ? snr_to_rate(pnum, s.rb_bandwidth_hz, table) : pnum;
        const auto [sk, sv] = one_of("rho", "r_s");
        auto values = to_list(sv->text, sv->line, sk);
        if (values.size() != s.f_s_total.size())
            throw ParseError(sv->line, "`" + name + sk + "` needs one value per secondary ES (" +
                                           std::to_string(s.f_s_total.size()) + ")");
        if (std::string_view(sk) == "rho")
            for (auto& v : values)
                v *= c.r_p;
        c.r_s = std::move(values);
        inst.tasks.push_back(t);
        inst.channels.push_back(std::move(c));
    }
    if (beta_count == 0)
        assign_uniform_beta(inst.tasks);
    else if (beta_count != static_cast<int>(inst.tasks.size()))
        throw ParseError(lineno, "give `beta` for every UE or for none");

    try {
        validate_instance(inst);
    } catch (const ValidationError& e) {
        throw ParseError(lineno, std::string("invalid instance: ") + e.what());
    }
    return inst;
}

Instance load_instance(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config: " + path);
    return parse_instance(in, std::filesystem::path(path).parent_path().string());
}

} // namespace edgepart::cli
