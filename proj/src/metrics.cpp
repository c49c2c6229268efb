#include "softmapper/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "json.hpp"

namespace softmapper {

namespace {

struct MembershipSample {
    std::size_t point;
    std::size_t node;
};

std::vector<MembershipSample> membership_samples(const MapperGraph& g) {
    std::vector<MembershipSample> samples;
    for (std::size_t c = 0; c < g.nodes.size(); ++c) {
        for (std::size_t p : g.nodes[c].members) samples.push_back({p, c});
    }
    return samples;
}

double silhouette_impl(const PointCloud& pc, const MapperGraph& g, bool parallel) {
    if (g.nodes.size() < 2) throw std::invalid_argument("silhouette needs at least two nodes");
    auto samples = membership_samples(g);
    if (samples.size() < 2) throw std::invalid_argument("silhouette needs at least two samples");

    std::vector<std::size_t> node_size(g.nodes.size());
    for (const auto& s : samples) node_size[s.node]++;

    const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(samples.size());
    std::vector<double> scores(samples.size(), 0.0);

#pragma omp parallel for schedule(static) if (parallel)
    for (std::ptrdiff_t i = 0; i < m; ++i) {
        const auto& si = samples[static_cast<std::size_t>(i)];
        if (node_size[si.node] < 2) {
            scores[static_cast<std::size_t>(i)] = 0.0;  // lone sample in its node
            continue;
        }
        std::vector<double> sum(g.nodes.size(), 0.0);
        for (std::ptrdiff_t j = 0; j < m; ++j) {
            if (j == i) continue;
            const auto& sj = samples[static_cast<std::size_t>(j)];
            sum[sj.node] += euclidean_distance(pc.point(si.point), pc.point(sj.point), pc.d);
        }
        double a = sum[si.node] / static_cast<double>(node_size[si.node] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < g.nodes.size(); ++c) {
            if (c == si.node || node_size[c] == 0) continue;
            b = std::min(b, sum[c] / static_cast<double>(node_size[c]));
        }
        double denom = std::max(a, b);
        scores[static_cast<std::size_t>(i)] = denom > 0.0 ? (b - a) / denom : 0.0;
    }

    double total = 0.0;
    for (double s : scores) total += s;
    return total / static_cast<double>(samples.size());
}

}  // namespace

double silhouette(const PointCloud& pc, const MapperGraph& g) {
    return silhouette_impl(pc, g, true);
}

namespace ref {
double silhouette(const PointCloud& pc, const MapperGraph& g) {
    return silhouette_impl(pc, g, false);
}
}  // namespace ref

void GroundTruthTopology::validate() const {
    if (!components && !loops)
        throw std::invalid_argument("ground truth must specify components or loops");
}

namespace {

double count_ratio(std::size_t detected, std::size_t truth) {
    if (detected == 0 && truth == 0) return 1.0;
    double lo = static_cast<double>(std::min(detected, truth));
    double hi = static_cast<double>(std::max(detected, truth));
    return lo / hi;
}

}  // namespace

double tsr(const MapperGraph& g, const GroundTruthTopology& truth) {
    truth.validate();
    GraphStats stats = graph_stats(g);
    double sum = 0.0;
    std::size_t dims = 0;
    if (truth.components) {
        sum += count_ratio(stats.connected_components, *truth.components);
        ++dims;
    }
    if (truth.loops) {
        sum += count_ratio(stats.loops, *truth.loops);
        ++dims;
    }
    return sum / static_cast<double>(dims);
}

double sc_adj(double sc_norm, double tsr_value) {
    if (sc_norm < 0.0 || sc_norm > 1.0 || tsr_value < 0.0 || tsr_value > 1.0)
        throw std::invalid_argument("sc_adj inputs must lie in [0,1]");
    return 0.5 * (sc_norm + tsr_value);
}

std::string MetricReport::to_json() const {
    nlohmann::json j;
    j["sc"] = sc;
    j["sc_norm"] = sc_norm;
    if (tsr) j["tsr"] = *tsr;
    if (sc_adj) j["sc_adj"] = *sc_adj;
    return j.dump(2) + "\n";
}

MetricReport metric_report(const PointCloud& pc, const MapperGraph& g,
                           const std::optional<GroundTruthTopology>& truth) {
    MetricReport r;
    r.sc = silhouette(pc, g);
    r.sc_norm = (r.sc + 1.0) / 2.0;
    if (truth) {
        r.tsr = tsr(g, *truth);
        r.sc_adj = sc_adj(r.sc_norm, *r.tsr);
    }
    return r;
}

namespace {

// regularized incomplete gamma, lower P(a,x) via series, upper Q via
// continued fraction
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_contfrac(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double chi_square_upper_tail(double statistic, double df) {
    if (statistic < 0.0 || df <= 0.0) throw std::invalid_argument("invalid chi-square inputs");
    if (statistic == 0.0) return 1.0;
    double a = 0.5 * df;
    double x = 0.5 * statistic;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_contfrac(a, x);
}

std::pair<double, double> chi_square_test(const std::vector<std::size_t>& counts_a,
                                          const std::vector<std::size_t>& counts_b) {
    if (counts_a.size() != counts_b.size())
        throw std::invalid_argument("histograms must share one category set");
    if (counts_a.empty()) throw std::invalid_argument("histograms are empty");

    double total_a = 0.0, total_b = 0.0;
    for (std::size_t v : counts_a) total_a += static_cast<double>(v);
    for (std::size_t v : counts_b) total_b += static_cast<double>(v);
    if (total_a < 1.0 || total_b < 1.0) throw std::invalid_argument("each histogram needs >= 1 count");

    double statistic = 0.0;
    std::size_t used_columns = 0;
    double grand = total_a + total_b;
    for (std::size_t c = 0; c < counts_a.size(); ++c) {
        double col = static_cast<double>(counts_a[c] + counts_b[c]);
        if (col == 0.0) continue;  // expected zero in both rows
        ++used_columns;
        double ea = total_a * col / grand;
        double eb = total_b * col / grand;
        double da = static_cast<double>(counts_a[c]) - ea;
        double db = static_cast<double>(counts_b[c]) - eb;
        statistic += da * da / ea + db * db / eb;
    }
    if (used_columns < 2) return {0.0, 1.0};  // one shared category: no freedom
    double df = static_cast<double>(used_columns - 1);
    return {statistic, chi_square_upper_tail(statistic, df)};
}

}  // namespace softmapper
