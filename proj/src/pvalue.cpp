#include "rmcpd/pvalue.hpp"

#include <algorithm>
#include <cmath>

#include "rmcpd/errors.hpp"

namespace rmcpd {

Channel channel_from_string(const std::string& name) {
    if (name == "out_w") return Channel::out_w;
    if (name == "out_d") return Channel::out_d;
    if (name == "in") return Channel::in;
    if (name == "in_tilde" || name == "tilde") return Channel::in_tilde;
    if (name == "combined" || name == "max") return Channel::combined;
    throw config_error("unknown channel '" + name + "'");
}

std::string to_string(Channel c) {
    switch (c) {
        case Channel::out_w: return "out_w";
        case Channel::out_d: return "out_d";
        case Channel::in: return "in";
        case Channel::in_tilde: return "in_tilde";
        case Channel::combined: return "combined";
    }
    return "?";
}

std::string to_string(Correction c) { return c == Correction::A1 ? "A1" : "A2"; }

double normal_cdf(double x) { return 0.5 * std::erfc(-x * 0.7071067811865475244); }

double normal_pdf(double x) { return 0.3989422804014326779 * std::exp(-0.5 * x * x); }

double nu_function(double x) {
    if (x < 0.0) throw config_error("nu is defined for x >= 0");
    if (x < 1e-8) return 1.0;
    const double half = 0.5 * x;
    return (2.0 / x) * (normal_cdf(half) - 0.5) / (half * normal_cdf(half) + normal_pdf(half));
}

HFunctions h_functions(double n, double x) {
    if (!(x > 0.0 && x < 1.0)) throw config_error("h functions require x in (0, 1)");
    HFunctions h;
    const double denom = 2.0 * x * (1.0 - x) * (n * n * x * x - n * n * x + n - 1.0);
    if (denom == 0.0) throw numeric_error("h_out,w pole at x=" + std::to_string(x));
    h.out_w = (n - 1.0) * (2.0 * n * x * x - 2.0 * n * x + 1.0) / denom;
    h.out_d = h.in = 1.0 / (2.0 * x * (1.0 - x));
    return h;
}

namespace {

struct NodeRange {
    int lo = 0, hi = 0;   // integer t range of valid process support
    bool two_sided = false;
    bool use_h_w = false;
};

NodeRange channel_range(const TailQuery& q) {
    NodeRange r;
    switch (q.channel) {
        case Channel::out_w:
            // Z_out,w degenerates at t = 1 and t = n-1 (h_out,w has poles there).
            r.lo = std::max(q.n0, 2);
            r.hi = std::min(q.n1, q.n - 2);
            r.two_sided = false;
            r.use_h_w = true;
            break;
        case Channel::out_d:
        case Channel::in:
        case Channel::in_tilde:
            r.lo = q.n0;
            r.hi = q.n1;
            r.two_sided = true;
            r.use_h_w = false;
            break;
        case Channel::combined:
            throw config_error("combined channel has no single-channel tail integral");
    }
    return r;
}

void validate_query(const TailQuery& q) {
    if (q.b <= 0.0) throw config_error("threshold b must be positive");
    if (q.n < 4) throw config_error("tail approximation requires n >= 4");
    if (q.n0 < 1 || q.n1 > q.n - 1 || q.n0 >= q.n1) throw config_error("window must satisfy 1 <= n0 < n1 <= n-1");
    if (q.refine < 1 || q.refine > 64) throw config_error("refine must be in 1..64");
}

}  // namespace

namespace detail {

PValueResult tail_probability(const TailQuery& q, const std::function<double(double)>* gamma_at) {
    validate_query(q);
    const NodeRange r = channel_range(q);
    PValueResult res;
    if (r.lo >= r.hi) {
        res.p = res.p_raw = 0.0;
        res.dropped_nodes = 0;
        return res;  // empty support
    }

    int refine = q.refine;
    long long steps = static_cast<long long>(r.hi - r.lo) * refine;
    if (steps % 2 != 0) {  // composite Simpson needs an even interval count
        refine *= 2;
        steps *= 2;
    }
    const double n = q.n;
    const double b = q.b;
    const double dx = 1.0 / (n * refine);

    double sum = 0.0;
    int valid_nodes = 0;
    for (long long i = 0; i <= steps; ++i) {
        const double t = r.lo + static_cast<double>(i) / refine;
        const double x = t / n;
        // Only the needed kernel: h_out,w has poles at t = 1 and t = n-1,
        // which lie inside the two-sided channels' windows.
        const double hx = r.use_h_w ? h_functions(n, x).out_w : 1.0 / (2.0 * x * (1.0 - x));
        double f = hx * nu_function(b * std::sqrt(2.0 * hx / n));
        if (gamma_at != nullptr) {
            const double gamma = (*gamma_at)(t);
            if (std::isnan(gamma)) {
                ++res.dropped_nodes;
                continue;
            }
            if (std::abs(gamma) > 1e-12) {
                const double disc = 1.0 + 2.0 * gamma * b;
                if (disc < 0.0) {
                    ++res.dropped_nodes;
                    continue;
                }
                const double theta = 2.0 * b / (1.0 + std::sqrt(disc));
                const double s = 1.0 + gamma * theta;
                if (s <= 0.0) {
                    ++res.dropped_nodes;
                    continue;
                }
                f *= std::exp(0.5 * (b - theta) * (b - theta) + gamma * theta * theta * theta / 6.0) / std::sqrt(s);
            }
        }
        if (!std::isfinite(f)) throw numeric_error("non-finite tail integrand at t=" + std::to_string(t));
        const double weight = (i == 0 || i == steps) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        sum += weight * f;
        ++valid_nodes;
    }
    if (gamma_at != nullptr && valid_nodes == 0) {
        TailQuery a1 = q;
        a1.correction = Correction::A1;
        res = {};
        res.p_raw = pvalue_A1(a1);
        res.p = std::clamp(res.p_raw, 0.0, 1.0);
        res.fell_back_a1 = true;
        return res;
    }
    double p = b * normal_pdf(b) * sum * dx / 3.0;
    if (r.two_sided) p *= 2.0;
    res.p_raw = p;
    // The boundary-crossing approximation is a large-b expansion; below the
    // solver bracket it is not meaningful, so report the conservative 1.
    res.p = q.b < 0.5 ? 1.0 : std::clamp(p, 0.0, 1.0);
    return res;
}

}  // namespace detail

double pvalue_A1(const TailQuery& q) {
    TailQuery a1 = q;
    a1.correction = Correction::A1;
    return detail::tail_probability(a1, nullptr).p;
}

PValueResult pvalue_A2(const TailQuery& q, const MomentContext& moments) {
    if (moments.n() != q.n) throw config_error("moment context does not match query n");
    const std::function<double(double)> gamma_at = [&](double t) -> double {
        const MomentSet ms = moments.at(t);
        switch (q.channel) {
            case Channel::out_w: return ms.out_w_ok ? ms.gamma_out_w : std::nan("");
            case Channel::out_d: return ms.out_d_ok ? ms.gamma_out_d : std::nan("");
            case Channel::in: return ms.in_ok ? ms.gamma_in : std::nan("");
            case Channel::in_tilde: return ms.tilde_ok ? ms.gamma_in_tilde : std::nan("");
            default: return std::nan("");
        }
    };
    return detail::tail_probability(q, &gamma_at);
}

PValueResult channel_pvalue(const TailQuery& q, const MomentContext* moments) {
    if (q.correction == Correction::A1) {
        PValueResult r;
        r.p_raw = detail::tail_probability(q, nullptr).p_raw;
        r.p = std::clamp(r.p_raw, 0.0, 1.0);
        return r;
    }
    if (moments == nullptr) throw config_error("A2 correction requires a similarity graph");
    return pvalue_A2(q, *moments);
}

CombinedPValue combined_pvalue(double b, int n, int n0, int n1, const MomentContext& moments,
                               Correction correction, int refine, bool include_tilde) {
    CombinedPValue out;
    TailQuery q{b, n, n0, n1, Channel::out_w, correction, refine};
    out.out_w = channel_pvalue(q, &moments);
    q.channel = Channel::out_d;
    out.out_d = channel_pvalue(q, &moments);
    out.tilde_included = include_tilde && !moments.varrho_degenerate();
    double prod = (1.0 - out.out_w.p) * (1.0 - out.out_d.p);
    if (out.tilde_included) {
        q.channel = Channel::in_tilde;
        out.in_tilde = channel_pvalue(q, &moments);
        prod *= (1.0 - out.in_tilde.p);
    }
    out.p_m = std::clamp(1.0 - prod, 0.0, 1.0);
    return out;
}

double critical_value(double alpha, Channel channel, Correction correction, int n, int n0, int n1,
                      const MomentContext* moments, int refine) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw config_error("alpha must lie in (0, 1)");
    auto p_of = [&](double b) -> double {
        if (channel == Channel::combined) {
            if (moments == nullptr) throw config_error("combined critical value requires a similarity graph");
            return combined_pvalue(b, n, n0, n1, *moments, correction, refine).p_m;
        }
        TailQuery q{b, n, n0, n1, channel, correction, refine};
        return channel_pvalue(q, moments).p;
    };

    double lo = 0.5, hi = 10.0;
    const double p_lo = p_of(lo), p_hi = p_of(hi);
    if (!(p_lo >= alpha && p_hi <= alpha))
        throw numeric_error("no critical value in [0.5, 10]: p(0.5)=" + std::to_string(p_lo) +
                            ", p(10)=" + std::to_string(p_hi) + ", alpha=" + std::to_string(alpha));
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double p = p_of(mid);
        if (std::abs(p - alpha) < 1e-6 && hi - lo < 1e-7) return mid;
        if (p > alpha)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace rmcpd
