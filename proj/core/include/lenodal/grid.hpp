#ifndef LENODAL_GRID_HPP
#define LENODAL_GRID_HPP

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "lenodal/exponents.hpp"

namespace lenodal {

enum class GridKind : std::uint8_t {
    radial_1d = 0,
    biradial_2d = 1,
    biradial_radial_3d = 2,
    cartesian = 3,
};

std::string to_string(GridKind k);

struct Axis {
    std::uint32_t n = 0; // nodes
    double h = 0;        // spacing
};

/// Area of the unit sphere S^{m-1} in R^m.
double unit_sphere_area(int m);

/// Structured cell-centered grid.
///
/// Reduced axes (s, t, r and the 1d radius) start at h/2, so no node sits
/// on a polar axis.  Cartesian axes cover [-R, R] cell-centered.  Quadrature
/// weights carry the reduced volume element:
///   radial_1d           w = |S^{N-1}| r^{N-1} h
///   biradial_2d         w = (2 pi s)(2 pi t) hs ht
///   biradial_radial_3d  w = (2 pi s)(2 pi t) |S^{N-5}| r^{N-5} hs ht hr
///   cartesian           w = h^N
class Grid {
public:
    Grid(GridKind kind, int N, int j, double extent, int resolution);

    GridKind kind() const { return kind_; }
    int dimension() const { return N_; }
    int block_count() const { return j_; }
    double extent() const { return extent_; }
    int axis_count() const { return static_cast<int>(axes_.size()); }
    const std::vector<Axis>& axes() const { return axes_; }
    std::size_t size() const { return size_; }

    double coord(int axis, int i) const;
    bool is_reduced() const { return kind_ != GridKind::cartesian; }

    void unflatten(std::size_t idx, int* out) const; // row-major, last axis fastest
    std::size_t flatten(const int* multi) const;

    /// Full coordinate tuple of a node (length axis_count).
    std::vector<double> node(std::size_t idx) const;

    const Eigen::VectorXd& weights() const;
    const Eigen::SparseMatrix<double>& laplacian_matrix() const;

    bool compatible(const Grid& other) const;

private:
    void build_laplacian() const;

    GridKind kind_;
    int N_, j_;
    double extent_;
    std::vector<Axis> axes_;
    std::size_t size_ = 0;

    mutable std::once_flag weights_once_, lap_once_;
    mutable Eigen::VectorXd weights_;
    mutable Eigen::SparseMatrix<double> lap_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(GridKind kind, int N, int j, double extent, int resolution);

struct FieldMeta {
    std::optional<Exponents> exponents;
    std::string symmetry_tag; // e.g. "G1", "radial", empty if untagged
    bool equivariant = false; // set by symmetrize only
};

struct Field {
    GridPtr grid;
    Eigen::VectorXd values;
    FieldMeta meta;
};

Field make_field(GridPtr grid);

/// Samples a function of the node coordinate tuple.
template <class F>
Field sample(GridPtr grid, F&& fn) {
    Field f = make_field(grid);
    const std::size_t n = grid->size();
    for (std::size_t i = 0; i < n; ++i) f.values[static_cast<Eigen::Index>(i)] = fn(grid->node(i));
    return f;
}

/// Second-order discrete Laplacian (even reflection across reduced axes,
/// clamped-to-zero extension beyond the outer boundary).
Field laplacian(const Field& f);

double integrate(const Field& f);

} // namespace lenodal

#endif
