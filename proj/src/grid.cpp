#include "parsearch/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace parsearch {

namespace {
// One field on the largest allowed grid is ~0.8 GB; anything bigger is
// outside desk scale for this toolkit.
constexpr std::size_t kMaxNodes = 100'000'000;
}

const char* mode_name(SearchMode mode) {
    switch (mode) {
        case SearchMode::Parallel: return "parallel";
        case SearchMode::Sequential: return "sequential";
        case SearchMode::Hybrid: return "hybrid";
    }
    return "unknown";
}

SearchMode mode_from_name(const std::string& name) {
    if (name == "parallel") return SearchMode::Parallel;
    if (name == "sequential") return SearchMode::Sequential;
    if (name == "hybrid") return SearchMode::Hybrid;
    throw std::invalid_argument("unknown search mode: " + name);
}

GridSpec::GridSpec(std::vector<double> lower, std::vector<double> upper, double spacing)
    : lower_(std::move(lower)), upper_(std::move(upper)), h_(spacing) {
    if (lower_.empty() || lower_.size() != upper_.size()) {
        throw std::invalid_argument("GridSpec: lower/upper extents must be non-empty and match");
    }
    if (!(h_ > 0.0) || !std::isfinite(h_)) {
        throw std::invalid_argument("GridSpec: spacing must be positive");
    }
    const int d = dimension();
    counts_.resize(d);
    node_count_ = 1;
    for (int a = 0; a < d; ++a) {
        const double span = upper_[a] - lower_[a];
        if (!(span > 0.0)) {
            throw std::invalid_argument("GridSpec: upper must exceed lower on every axis");
        }
        const double m = std::round(span / h_);
        const double ulp = span - std::nextafter(span, 0.0);
        if (std::fabs(span - m * h_) > (m + 1.0) * std::max(ulp, 1e-12 * h_)) {
            throw std::invalid_argument(
                "GridSpec: extent on axis " + std::to_string(a) +
                " is not an integer multiple of the spacing");
        }
        counts_[a] = static_cast<int>(m) + 1;
        if (counts_[a] < 3) {
            throw std::invalid_argument("GridSpec: need at least 3 nodes per axis");
        }
        if (node_count_ > kMaxNodes / static_cast<std::size_t>(counts_[a])) {
            throw std::invalid_argument("GridSpec: total node count exceeds the memory budget");
        }
        node_count_ *= static_cast<std::size_t>(counts_[a]);
    }
    strides_.resize(d);
    std::size_t s = 1;
    for (int a = d - 1; a >= 0; --a) {
        strides_[a] = s;
        s *= static_cast<std::size_t>(counts_[a]);
    }
}

std::size_t GridSpec::flat_index(std::span<const int> multi) const {
    std::size_t idx = 0;
    for (int a = 0; a < dimension(); ++a) {
        idx += static_cast<std::size_t>(multi[a]) * strides_[a];
    }
    return idx;
}

void GridSpec::multi_index(std::size_t flat, std::span<int> out) const {
    for (int a = 0; a < dimension(); ++a) {
        out[a] = static_cast<int>(flat / strides_[a]);
        flat %= strides_[a];
    }
}

void GridSpec::node_point(std::size_t flat, std::span<double> out) const {
    for (int a = 0; a < dimension(); ++a) {
        const int i = static_cast<int>(flat / strides_[a]);
        flat %= strides_[a];
        out[a] = coordinate(a, i);
    }
}

bool GridSpec::is_interior(std::size_t flat) const {
    for (int a = 0; a < dimension(); ++a) {
        const int i = static_cast<int>(flat / strides_[a]);
        flat %= strides_[a];
        if (i == 0 || i == counts_[a] - 1) return false;
    }
    return true;
}

std::size_t GridSpec::nearest_node(std::span<const double> point) const {
    std::size_t idx = 0;
    for (int a = 0; a < dimension(); ++a) {
        int i = static_cast<int>(std::lround((point[a] - lower_[a]) / h_));
        i = std::clamp(i, 0, counts_[a] - 1);
        idx += static_cast<std::size_t>(i) * strides_[a];
    }
    return idx;
}

bool GridSpec::contains(std::span<const double> point) const {
    for (int a = 0; a < dimension(); ++a) {
        if (point[a] < lower_[a] || point[a] > upper_[a]) return false;
    }
    return true;
}

bool GridSpec::operator==(const GridSpec& other) const {
    return lower_ == other.lower_ && upper_ == other.upper_ && h_ == other.h_;
}

double obstacle_at(std::span<const double> point) {
    double g = 0.0;
    for (double x : point) g = std::max(g, x);
    return g;
}

ScalarField build_obstacle(const GridSpec& grid) {
    ScalarField f(grid);
    const int d = grid.dimension();
    std::vector<double> x(d);
    for (std::size_t n = 0; n < grid.node_count(); ++n) {
        grid.node_point(n, x);
        f[n] = obstacle_at(x);
    }
    return f;
}

double discrete_laplacian(const ScalarField& field, std::size_t node) {
    const GridSpec& g = field.grid;
    if (!g.is_interior(node)) {
        throw std::invalid_argument("discrete_laplacian: node must be interior");
    }
    const double h2 = g.spacing() * g.spacing();
    double acc = 0.0;
    for (int a = 0; a < g.dimension(); ++a) {
        const std::size_t s = g.stride(a);
        acc += field[node + s] - 2.0 * field[node] + field[node - s];
    }
    return acc / h2;
}

namespace {

// Far-field profile shared by all modes: the obstacle, the diagonal
// channel asymptote for every coordinate pair, and the one-alternative
// axis profile per coordinate. Each term is a lower bound on the value
// function, so the max under-estimates slightly and decays to the truth
// away from the channels.
double far_field_value(std::span<const double> x, double axis_cost, double diag_theta) {
    double v = obstacle_at(x);
    const int d = static_cast<int>(x.size());
    for (int i = 0; i < d; ++i) {
        v = std::max(v, psi_value(x[i], axis_cost));
        for (int j = i + 1; j < d; ++j) {
            v = std::max(v, eta_value(to_rotated(x[i], x[j]), diag_theta));
        }
    }
    return v;
}

}  // namespace

ScalarField truncation_boundary_values(const GridSpec& grid, const Cost& cost,
                                       SearchMode mode) {
    const bool seq = mode != SearchMode::Parallel;
    validate_cost(cost, seq);
    if (mode == SearchMode::Hybrid) validate_hybrid_cost(cost);

    // axis channels follow the cheapest single-alternative technology;
    // the diagonal channel width is set by the active technology there.
    const double axis_cost = (mode == SearchMode::Parallel) ? cost.c : cost.cprime;
    const double diag_theta = (mode == SearchMode::Sequential) ? 2.0 * cost.cprime : cost.c;

    const double h = grid.spacing();
    for (int a = 0; a < grid.dimension(); ++a) {
        const double need_lo = -1.0 / (4.0 * axis_cost) - 2.0 * h;
        double need_hi = 1.0 / (4.0 * axis_cost) + 2.0 * h;
        if (grid.dimension() >= 2) {
            need_hi = std::max(need_hi, 1.0 / (2.0 * diag_theta) + 2.0 * h);
        }
        if (grid.lower(a) > need_lo || grid.upper(a) < need_hi) {
            throw std::invalid_argument(
                "truncation_boundary_values: domain too small on axis " + std::to_string(a) +
                "; the continuation channels reach the boundary. Enlarge the domain to at"
                " least [" + std::to_string(need_lo) + ", " + std::to_string(need_hi) + "]");
        }
    }

    ScalarField bc(grid);
    const int d = grid.dimension();
    std::vector<double> x(d);
    for (std::size_t n = 0; n < grid.node_count(); ++n) {
        grid.node_point(n, x);
        bc[n] = far_field_value(x, axis_cost, diag_theta);
    }
    return bc;
}

double interpolate(const ScalarField& field, std::span<const double> point) {
    const GridSpec& g = field.grid;
    const int d = g.dimension();
    if (!g.contains(point)) {
        throw std::invalid_argument("interpolate: point outside the grid box");
    }
    std::vector<int> base(d);
    std::vector<double> w(d);
    for (int a = 0; a < d; ++a) {
        double r = (point[a] - g.lower(a)) / g.spacing();
        int i = static_cast<int>(std::floor(r));
        i = std::clamp(i, 0, g.count(a) - 2);
        base[a] = i;
        w[a] = std::clamp(r - i, 0.0, 1.0);
    }
    double acc = 0.0;
    const int corners = 1 << d;
    for (int mask = 0; mask < corners; ++mask) {
        double weight = 1.0;
        std::size_t idx = 0;
        for (int a = 0; a < d; ++a) {
            const bool hi = (mask >> a) & 1;
            weight *= hi ? w[a] : 1.0 - w[a];
            idx += static_cast<std::size_t>(base[a] + (hi ? 1 : 0)) * g.stride(a);
        }
        acc += weight * field[idx];
    }
    return acc;
}

}  // namespace parsearch
