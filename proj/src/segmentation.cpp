#include "rmcpd/segmentation.hpp"

#include <algorithm>
#include <cmath>

#include "rmcpd/errors.hpp"

namespace rmcpd {

namespace {

void segment_recurse(const PanelDataset& ds, const SegmentationOptions& opt, int lo, int hi, int depth,
                     int min_seg, SegmentationResult& out) {
    SegmentDecision dec;
    dec.lo = lo;
    dec.hi = hi;
    dec.depth = depth;
    const int len = hi - lo + 1;
    if (len < min_seg) {
        dec.skip_reason = "shorter than min_seg";
        out.tree.push_back(dec);
        return;
    }
    if (len < 4) {
        dec.skip_reason = "too short for the null moments (n >= 4)";
        out.tree.push_back(dec);
        return;
    }

    TestOptions test = opt.test;
    test.alpha = opt.bonferroni ? opt.test.alpha / std::pow(2.0, depth) : opt.test.alpha;
    dec.alpha_used = test.alpha;

    DetectResult res;
    try {
        res = run_detect(ds.slice(lo, hi), test);
    } catch (const numeric_error& e) {
        dec.skip_reason = std::string("test failed: ") + e.what();
        out.tree.push_back(dec);
        return;
    }
    dec.tested = true;
    dec.p_m = res.p_m;
    dec.tau_abs = lo - 1 + res.tau_hat;
    dec.significant = res.reject;
    out.tree.push_back(dec);

    if (!res.reject) return;
    out.change_points.push_back({dec.tau_abs, res.p_m, res.out_w.p_analytic, res.out_d.p_analytic,
                                 res.in_tilde.enabled ? res.in_tilde.p_analytic : 1.0});
    segment_recurse(ds, opt, lo, dec.tau_abs, depth + 1, min_seg, out);
    segment_recurse(ds, opt, dec.tau_abs + 1, hi, depth + 1, min_seg, out);
}

}  // namespace

SegmentationResult binary_segmentation(const PanelDataset& ds, const SegmentationOptions& options) {
    ds.validate();
    options.test.validate();
    int min_seg = options.min_seg;
    if (min_seg == 0)
        min_seg = std::max(4, 2 * static_cast<int>(std::ceil(options.test.n0_frac * ds.n)));
    if (min_seg < 4) throw config_error("min_seg must be >= 4");

    SegmentationResult out;
    segment_recurse(ds, options, 1, ds.n, 0, min_seg, out);
    std::sort(out.change_points.begin(), out.change_points.end(),
              [](const ChangePoint& a, const ChangePoint& b) { return a.position < b.position; });
    return out;
}

}  // namespace rmcpd
