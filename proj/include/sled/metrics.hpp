#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sled/image.hpp"

namespace sled {

struct ConfusionCounts {
    std::int64_t tp = 0, fp = 0, tn = 0, fn = 0;
};

/// The five ISIC challenge metrics, all in [0,1].
struct MetricsReport {
    double ac = 0.0, se = 0.0, sp = 0.0, di = 0.0, ja = 0.0;
};

/// Pixelwise counts with lesion as the positive class.
/// Throws DimensionMismatch for differently sized masks.
ConfusionCounts confusion(const Mask& pred, const Mask& gt);

/// AC, SE, SP, DI, JA from the counts; 0/0 ratios are defined as 1
/// (both-empty classes count as perfect).
MetricsReport compute(const ConfusionCounts& counts);

/// One CSV row: metrics when available, otherwise a status marker
/// ("no_gt", "error:...") in the metric columns' place.
struct CsvRow {
    std::string image;
    bool has_metrics = false;
    MetricsReport metrics;
    std::string status;
};

/// "image,ac,se,sp,di,ja" header, one row per image, and a final "mean" row
/// over the rows that carry metrics.
void write_csv(std::ostream& os, const std::vector<CsvRow>& rows);

} // namespace sled
