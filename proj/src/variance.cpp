#include "l1est/variance.hpp"

#include <algorithm>
#include <cmath>

#include "l1est/errors.hpp"
#include "l1est/rng.hpp"

namespace l1est {

namespace {

struct Moments {
    double mean = 0.0;
    double var = 0.0;
};

template <class F>
Moments joint_moments(const JointDiscrete& xy, F f) {
    Moments m;
    for (std::size_t i = 0; i < xy.x.size(); ++i)
        for (std::size_t j = 0; j < xy.y.size(); ++j) m.mean += xy.p[i][j] * f(xy.x[i], xy.y[j]);
    for (std::size_t i = 0; i < xy.x.size(); ++i)
        for (std::size_t j = 0; j < xy.y.size(); ++j) {
            const double d = f(xy.x[i], xy.y[j]) - m.mean;
            m.var += xy.p[i][j] * d * d;
        }
    return m;
}

void check_joint(const JointDiscrete& xy) {
    if (xy.x.empty() || xy.y.empty() || xy.p.size() != xy.x.size()) throw DomainError("joint law has bad shape");
    double total = 0.0;
    for (const auto& row : xy.p) {
        if (row.size() != xy.y.size()) throw DomainError("joint law has bad shape");
        for (double v : row) {
            if (!(v >= 0.0)) throw DomainError("joint probabilities must be non-negative");
            total += v;
        }
    }
    if (std::fabs(total - 1.0) > 1e-12) throw DomainError("joint probabilities must sum to 1");
}

}  // namespace

SwitchVariance switch_variance(const JointDiscrete& xy, double p_a) {
    check_joint(xy);
    if (!(p_a >= 0.0 && p_a <= 1.0)) throw DomainError("P(A) must lie in [0, 1]");
    const Moments mx = joint_moments(xy, [](double x, double) { return x; });
    const Moments my = joint_moments(xy, [](double, double y) { return y; });

    // Outcomes are (x_i, y_j, a) with a in {0, 1}.
    SwitchVariance out;
    double mean = 0.0;
    for (std::size_t i = 0; i < xy.x.size(); ++i)
        for (std::size_t j = 0; j < xy.y.size(); ++j)
            mean += xy.p[i][j] * (p_a * xy.x[i] + (1.0 - p_a) * xy.y[j]);
    for (std::size_t i = 0; i < xy.x.size(); ++i)
        for (std::size_t j = 0; j < xy.y.size(); ++j) {
            const double dx = xy.x[i] - mean, dy = xy.y[j] - mean;
            out.enumerated += xy.p[i][j] * (p_a * dx * dx + (1.0 - p_a) * dy * dy);
        }
    const double d = mx.mean - my.mean;
    out.formula = mx.var * p_a + my.var * (1.0 - p_a) + d * d * p_a * (1.0 - p_a);
    return out;
}

TruncationVariance truncation_variance(const JointDiscrete& xy) {
    check_joint(xy);
    TruncationVariance out;
    out.var_min = joint_moments(xy, [](double x, double y) { return std::min(x, y); }).var;
    out.var_x = joint_moments(xy, [](double x, double) { return x; }).var;
    out.var_y = joint_moments(xy, [](double, double y) { return y; }).var;
    return out;
}

TruncationVariance truncation_variance(const std::vector<double>& x, const std::vector<double>& p, double c) {
    JointDiscrete xy{x, {c}, {}};
    for (double v : p) xy.p.push_back({v});
    return truncation_variance(xy);
}

JointDiscrete random_joint(std::uint64_t seed, std::uint64_t index, std::size_t max_support) {
    if (max_support < 1) throw DomainError("support size must be positive");
    const CounterRng rng(seed);
    const std::uint64_t stream = stream_id(StreamDomain::Selftest, 0xA0, static_cast<std::uint32_t>(index));
    std::uint64_t k = 0;
    auto size = [&] { return 1 + static_cast<std::size_t>(rng.uniform(stream, k++) * max_support); };
    JointDiscrete xy;
    xy.x.resize(size());
    xy.y.resize(size());
    for (auto& v : xy.x) v = 10.0 * rng.uniform(stream, k++) - 5.0;
    for (auto& v : xy.y) v = 10.0 * rng.uniform(stream, k++) - 5.0;
    double total = 0.0;
    xy.p.assign(xy.x.size(), std::vector<double>(xy.y.size()));
    for (auto& row : xy.p)
        for (auto& v : row) {
            v = rng.uniform(stream, k++);
            total += v;
        }
    for (auto& row : xy.p)
        for (auto& v : row) v /= total;
    return xy;
}

}  // namespace l1est
