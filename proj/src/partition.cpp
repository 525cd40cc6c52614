#include "edgepart/partition.hpp"

#include <algorithm>
#include <string>

namespace edgepart {

namespace {

detail::ClosedForms<double> forms(const TaskSpec& t, const UeLink& l, const UeShare& s)
{
    return detail::closed_forms<double>(t.b, t.alpha, l.r_p, l.big_r, s.n, s.f_p, l.r_s, s.f_s);
}

} // namespace

double latency_dou(const TaskSpec& t, const UeLink& l, const UeShare& s, double lambda)
{
    const double upload_p = lambda * t.b / (s.n * l.r_p);
    const double primary = lambda * t.alpha * t.b / s.f_p;
    const double secondary =
        (1.0 - lambda) * t.b / (s.n * l.r_s) + (1.0 - lambda) * t.alpha * t.b / s.f_s;
    return upload_p + std::max(primary, secondary);
}

double latency_doe(const TaskSpec& t, const UeLink& l, const UeShare& s, double lambda)
{
    const double upload = t.b / (s.n * l.r_p);
    const double primary = lambda * t.alpha * t.b / s.f_p;
    const double secondary =
        (1.0 - lambda) * t.b / l.big_r + (1.0 - lambda) * t.alpha * t.b / s.f_s;
    return upload + std::max(primary, secondary);
}

double opt_lambda_dou(const TaskSpec& t, const UeLink& l, const UeShare& s)
{
    return forms(t, l, s).lambda_u;
}

double opt_lambda_doe(const TaskSpec& t, const UeLink& l, const UeShare& s)
{
    return forms(t, l, s).lambda_e;
}

double min_latency_dou(const TaskSpec& t, const UeLink& l, const UeShare& s)
{
    return forms(t, l, s).t_u;
}

double min_latency_doe(const TaskSpec& t, const UeLink& l, const UeShare& s)
{
    return forms(t, l, s).t_e;
}

double threshold_factor(const TaskSpec& t, const UeLink& l, const UeShare& s)
{
    return s.f_p / (t.alpha * l.big_r) + s.f_p / s.f_s + 1.0;
}

PartitionDecision theorem1_select(const TaskSpec& t, const UeLink& l, const UeShare& s)
{
    PartitionDecision d;
    d.eta = threshold_factor(t, l, s);
    d.indicator = s.n * l.r_s / l.big_r + d.eta * l.r_s / l.r_p - 1.0;
    d.x = d.indicator >= 0.0 ? 1 : 0;
    d.lambda = d.x == 1 ? opt_lambda_dou(t, l, s) : opt_lambda_doe(t, l, s);
    return d;
}

SchemeWeights scheme_weights(const UeLink& l, const UeShare& s, double eta)
{
    if (!(eta >= 1.0))
        throw std::invalid_argument("scheme_weights: eta must be >= 1");
    const double ratio = std::clamp(s.n * l.r_s / l.big_r, 0.0, 1.0);
    SchemeWeights w;
    // Areas of the two regions of the unit square split by the selection line,
    // scaled so that s_u + s_e = 1.
    w.s_e = (2.0 - ratio) / (2.0 * eta);
    w.s_u = 1.0 - w.s_e;
    w.w_e = w.s_e / (w.s_u + w.s_e);
    w.w_u = 1.0 - w.w_e;
    return w;
}

LatencyReport estimated_latency(const TaskSpec& t, const UeLink& l, const UeShare& s)
{
    const auto c = forms(t, l, s);
    const auto w = scheme_weights(l, s, c.eta);
    LatencyReport r;
    r.t_u = c.t_u;
    r.t_e = c.t_e;
    r.t_star = std::min(c.t_u, c.t_e);
    r.t_tilde = w.w_u * c.t_u + w.w_e * c.t_e;
    return r;
}

GenericReduction reduce_generic(const TaskSpec& t, const ChannelState& chan, double n,
                                std::span<const double> f_s)
{
    if (f_s.empty() || f_s.size() != chan.r_s.size())
        throw std::invalid_argument("reduce_generic: need one r_s and f_s per secondary ES");
    for (std::size_t j = 0; j < f_s.size(); ++j)
        if (!(f_s[j] > 0.0) || !(chan.r_s[j] > 0.0))
            throw std::invalid_argument("reduce_generic: secondary rates and capacities must be positive");
    const auto r = detail::reduce<double>(t.alpha, chan.big_r, n, chan.r_s, f_s);
    if (!r.ok)
        throw ReductionError("reduce_generic: non-positive denominator in effective secondary "
                             "capacity or rate (N = " + std::to_string(f_s.size()) + ")");
    return {r.lambda_s_u, r.lambda_s_e, r.f_s_eff, r.r_s_eff};
}

TwoServerView two_server_view(const TaskSpec& t, const ChannelState& chan, double n, double f_p,
                              std::span<const double> f_s)
{
    TwoServerView v;
    v.reduction = reduce_generic(t, chan, n, f_s);
    v.link = {chan.r_p, v.reduction.r_s_eff, chan.big_r};
    v.share = {n, f_p, v.reduction.f_s_eff};
    return v;
}

} // namespace edgepart
