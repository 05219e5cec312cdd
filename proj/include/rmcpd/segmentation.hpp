#pragma once

#include <string>
#include <vector>

#include "rmcpd/detect.hpp"

namespace rmcpd {

struct SegmentationOptions {
    TestOptions test;
    int min_seg = 0;         // 0 = auto: max(4, 2*ceil(n0_frac * n))
    bool bonferroni = false; // test segment at depth D at level alpha / 2^D
};

struct SegmentDecision {
    int lo = 0, hi = 0;      // 1-based inclusive individual range
    int depth = 0;
    bool tested = false;
    std::string skip_reason;
    double alpha_used = 0;
    double p_m = 1;
    int tau_abs = 0;         // absolute position of the estimated change
    bool significant = false;
};

struct ChangePoint {
    int position = 0;        // last individual of the left segment
    double p_m = 1;
    double p_out_w = 1, p_out_d = 1, p_in_tilde = 1;
};

struct SegmentationResult {
    std::vector<ChangePoint> change_points;  // strictly increasing positions
    std::vector<SegmentDecision> tree;
};

// Recursive binary segmentation around the single change-point test. Each
// segment rebuilds its own k-MST; recursion stops on nonsignificance or when
// a segment is shorter than min_seg.
SegmentationResult binary_segmentation(const PanelDataset& ds, const SegmentationOptions& options);

}  // namespace rmcpd
