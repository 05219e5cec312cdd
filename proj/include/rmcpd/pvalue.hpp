#pragma once

#include <functional>
#include <optional>
#include <string>

#include "rmcpd/moments.hpp"

namespace rmcpd {

enum class Channel { out_w, out_d, in, in_tilde, combined };
enum class Correction { A1, A2 };

Channel channel_from_string(const std::string& name);
std::string to_string(Channel c);
std::string to_string(Correction c);

double normal_cdf(double x);
double normal_pdf(double x);

// Overshoot correction factor; nu(0) = 1 and nu decreases toward 0.
double nu_function(double x);

struct HFunctions {
    double out_w = 0;
    double out_d = 0;
    double in = 0;
};

// Finite-sample covariance-decay rates at x in (0,1):
//   h_out,w(n,x) = (n-1)(2nx^2-2nx+1) / (2x(1-x)(n^2x^2-n^2x+n-1))
//   h_out,d(n,x) = h_in(n,x) = 1/(2x(1-x)).
HFunctions h_functions(double n, double x);

struct TailQuery {
    double b = 0;       // threshold, > 0
    int n = 0;
    int n0 = 0, n1 = 0; // scan window, 1 <= n0 < n1 <= n-1
    Channel channel = Channel::out_w;
    Correction correction = Correction::A2;
    int refine = 1;     // quadrature nodes per unit t
};

struct PValueResult {
    double p = 0;         // clamped to [0, 1]
    double p_raw = 0;     // unclamped approximation
    int dropped_nodes = 0;
    bool fell_back_a1 = false;
};

// Tail approximation without skewness correction; graph-free.
double pvalue_A1(const TailQuery& q);

// Skewness-corrected tail approximation. Quadrature nodes where the
// correction is undefined (negative discriminant, degenerate variance) are
// dropped and counted; if every node drops the result falls back to A1.
PValueResult pvalue_A2(const TailQuery& q, const MomentContext& moments);

// Dispatch on q.correction; moments may be null for A1.
PValueResult channel_pvalue(const TailQuery& q, const MomentContext* moments);

struct CombinedPValue {
    double p_m = 0;
    PValueResult out_w, out_d, in_tilde;
    bool tilde_included = true;
};

// p_M = 1 - prod(1 - p_channel(b)) over the enabled channels.
CombinedPValue combined_pvalue(double b, int n, int n0, int n1, const MomentContext& moments,
                               Correction correction = Correction::A2, int refine = 1,
                               bool include_tilde = true);

// Solves pvalue(b) = alpha for b in [0.5, 10] by bisection; the returned b
// satisfies |pvalue(b) - alpha| < 1e-6.
double critical_value(double alpha, Channel channel, Correction correction, int n, int n0, int n1,
                      const MomentContext* moments = nullptr, int refine = 1);

namespace detail {
// A2 integral with an injectable skewness function gamma(t) (used by tests);
// gamma returning NaN marks an invalid node.
PValueResult tail_probability(const TailQuery& q, const std::function<double(double)>* gamma_at);
}  // namespace detail

}  // namespace rmcpd
