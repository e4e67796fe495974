// Uniform rectangular grids over a truncated box, node-indexed fields,
// the obstacle max{x_1,...,x_d, 0}, the discrete Laplacian stencil, and
// Dirichlet data for the truncation boundary.

#ifndef PARSEARCH_GRID_HPP
#define PARSEARCH_GRID_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "parsearch/analytic.hpp"

namespace parsearch {

enum class SearchMode { Parallel, Sequential, Hybrid };

const char* mode_name(SearchMode mode);
SearchMode mode_from_name(const std::string& name);

// Uniform spacing shared across axes; nodes at lower[a] + i*h.
// Node layout is row-major in axis order; use the index helpers rather
// than assuming the layout.
class GridSpec {
  public:
    GridSpec(std::vector<double> lower, std::vector<double> upper, double spacing);

    int dimension() const { return static_cast<int>(lower_.size()); }
    double spacing() const { return h_; }
    double lower(int axis) const { return lower_[axis]; }
    double upper(int axis) const { return upper_[axis]; }
    int count(int axis) const { return counts_[axis]; }
    std::size_t node_count() const { return node_count_; }
    std::size_t stride(int axis) const { return strides_[axis]; }

    double coordinate(int axis, int i) const { return lower_[axis] + i * h_; }

    std::size_t flat_index(std::span<const int> multi) const;
    void multi_index(std::size_t flat, std::span<int> out) const;
    void node_point(std::size_t flat, std::span<double> out) const;
    bool is_interior(std::size_t flat) const;

    // Index of the node nearest to `point`, clamped to the box.
    std::size_t nearest_node(std::span<const double> point) const;
    bool contains(std::span<const double> point) const;

    bool operator==(const GridSpec& other) const;

  private:
    std::vector<double> lower_;
    std::vector<double> upper_;
    double h_;
    std::vector<int> counts_;
    std::vector<std::size_t> strides_;
    std::size_t node_count_;
};

// Node-indexed real values over a grid.
struct ScalarField {
    GridSpec grid;
    std::vector<double> values;

    explicit ScalarField(const GridSpec& g, double fill = 0.0)
        : grid(g), values(g.node_count(), fill) {}

    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
};

// Per-node stopped/continue classification (true = contact = stop).
struct ContactMask {
    GridSpec grid;
    std::vector<std::uint8_t> stopped;

    explicit ContactMask(const GridSpec& g, bool fill = false)
        : grid(g), stopped(g.node_count(), fill ? 1 : 0) {}

    bool operator[](std::size_t i) const { return stopped[i] != 0; }
    void set(std::size_t i, bool v) { stopped[i] = v ? 1 : 0; }
};

// Obstacle g(x) = max{x_1, ..., x_d, 0} sampled at every node.
ScalarField build_obstacle(const GridSpec& grid);

double obstacle_at(std::span<const double> point);

// Central second difference summed over axes at an interior node.
// Throws if any stencil neighbor is missing.
double discrete_laplacian(const ScalarField& field, std::size_t node);

// Dirichlet data on the truncation boundary, evaluated from the
// closed-form far-field profiles of the given search mode. Values are
// defined (by the same formulas) at every node; the solvers read only
// the boundary ones. Always >= obstacle.
ScalarField truncation_boundary_values(const GridSpec& grid, const Cost& cost,
                                       SearchMode mode);

// Multilinear interpolation of a field at an arbitrary in-box point.
double interpolate(const ScalarField& field, std::span<const double> point);

}  // namespace parsearch

#endif
