#include "sled/metrics.hpp"

#include <iomanip>
#include <ostream>

#include "sled/errors.hpp"

namespace sled {
namespace {

double ratio(double num, double den) { return den == 0.0 ? 1.0 : num / den; }

void write_metrics(std::ostream& os, const MetricsReport& m) {
    os << std::fixed << std::setprecision(6) << m.ac << ',' << m.se << ',' << m.sp << ','
       << m.di << ',' << m.ja;
}

} // namespace

ConfusionCounts confusion(const Mask& pred, const Mask& gt) {
    if (pred.width != gt.width || pred.height != gt.height)
        throw DimensionMismatch("confusion: mask dimensions differ");
    ConfusionCounts c;
    for (std::size_t i = 0; i < pred.data.size(); ++i) {
        const bool p = pred.data[i] != 0;
        const bool g = gt.data[i] != 0;
        if (p && g)
            ++c.tp;
        else if (p && !g)
            ++c.fp;
        else if (!p && g)
            ++c.fn;
        else
            ++c.tn;
    }
    return c;
}

MetricsReport compute(const ConfusionCounts& c) {
    const double tp = static_cast<double>(c.tp), fp = static_cast<double>(c.fp);
    const double tn = static_cast<double>(c.tn), fn = static_cast<double>(c.fn);
    MetricsReport m;
    m.ac = ratio(tp + tn, tp + tn + fp + fn);
    m.se = ratio(tp, tp + fn);
    m.sp = ratio(tn, tn + fp);
    m.di = ratio(2.0 * tp, 2.0 * tp + fp + fn);
    m.ja = ratio(tp, tp + fp + fn);
    return m;
}

void write_csv(std::ostream& os, const std::vector<CsvRow>& rows) {
    os << "image,ac,se,sp,di,ja\n";
    MetricsReport sum;
    int counted = 0;
    for (const auto& row : rows) {
        os << row.image << ',';
        if (row.has_metrics) {
            write_metrics(os, row.metrics);
            sum.ac += row.metrics.ac;
            sum.se += row.metrics.se;
            sum.sp += row.metrics.sp;
            sum.di += row.metrics.di;
            sum.ja += row.metrics.ja;
            ++counted;
        } else {
            os << row.status << ",,,,";
        }
        os << '\n';
    }
    if (counted > 0) {
        MetricsReport mean{sum.ac / counted, sum.se / counted, sum.sp / counted,
                           sum.di / counted, sum.ja / counted};
        os << "mean,";
        write_metrics(os, mean);
        os << '\n';
    }
}

} // namespace sled
