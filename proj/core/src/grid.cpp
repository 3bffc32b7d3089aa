#include "lenodal/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/SparseCore>

namespace lenodal {

namespace {
constexpr double pi = std::numbers::pi;

// Polar coefficient c of the axis term  d^2/dx^2 + (c/x) d/dx,
// or -1 for a plain cartesian second derivative.
std::vector<double> polar_coefficients(GridKind kind, int N) {
    switch (kind) {
        case GridKind::radial_1d: return {static_cast<double>(N - 1)};
        case GridKind::biradial_2d: return {1.0, 1.0};
        case GridKind::biradial_radial_3d: return {1.0, 1.0, static_cast<double>(N - 5)};
        case GridKind::cartesian: return std::vector<double>(static_cast<std::size_t>(N), -1.0);
    }
    throw std::logic_error("unreachable");
}
} // namespace

std::string to_string(GridKind k) {
    switch (k) {
        case GridKind::radial_1d: return "radial_1d";
        case GridKind::biradial_2d: return "biradial_2d";
        case GridKind::biradial_radial_3d: return "biradial_radial_3d";
        case GridKind::cartesian: return "cartesian";
    }
    return "?";
}

double unit_sphere_area(int m) {
    if (m < 1) throw std::invalid_argument("unit_sphere_area needs m >= 1");
    return 2.0 * std::pow(pi, m / 2.0) / std::tgamma(m / 2.0);
}

Grid::Grid(GridKind kind, int N, int j, double extent, int resolution)
    : kind_(kind), N_(N), j_(j), extent_(extent) {
    if (extent <= 0) throw std::invalid_argument("grid extent R must be positive");
    if (N < 4) throw std::invalid_argument("grid dimension must be >= 4");
    const int min_res = (kind == GridKind::cartesian) ? 4 : 16;
    if (resolution < min_res)
        throw std::invalid_argument("resolution too small for kind " + to_string(kind));

    int naxes = 0;
    switch (kind) {
        case GridKind::radial_1d:
            naxes = 1;
            break;
        case GridKind::biradial_2d:
            if (N != 4 || j != 1)
                throw std::invalid_argument("biradial_2d requires N = 4, j = 1");
            naxes = 2;
            break;
        case GridKind::biradial_radial_3d:
            if (N <= 4 || j != 1)
                throw std::invalid_argument("biradial_radial_3d requires N > 4, j = 1");
            naxes = 3;
            break;
        case GridKind::cartesian:
            if (j < 0 || 4 * j > N)
                throw std::invalid_argument("cartesian grid needs 0 <= 4j <= N");
            naxes = N;
            break;
    }
    const double h = is_reduced() ? extent / resolution : 2.0 * extent / resolution;
    axes_.assign(static_cast<std::size_t>(naxes), Axis{static_cast<std::uint32_t>(resolution), h});
    size_ = 1;
    for (const Axis& a : axes_) size_ *= a.n;
}

double Grid::coord(int axis, int i) const {
    const Axis& a = axes_[static_cast<std::size_t>(axis)];
    return is_reduced() ? (i + 0.5) * a.h : -extent_ + (i + 0.5) * a.h;
}

void Grid::unflatten(std::size_t idx, int* out) const {
    for (int a = axis_count() - 1; a >= 0; --a) {
        const std::uint32_t n = axes_[static_cast<std::size_t>(a)].n;
        out[a] = static_cast<int>(idx % n);
        idx /= n;
    }
}

std::size_t Grid::flatten(const int* multi) const {
    std::size_t idx = 0;
    for (int a = 0; a < axis_count(); ++a)
        idx = idx * axes_[static_cast<std::size_t>(a)].n + static_cast<std::size_t>(multi[a]);
    return idx;
}

std::vector<double> Grid::node(std::size_t idx) const {
    std::vector<int> mi(static_cast<std::size_t>(axis_count()));
    unflatten(idx, mi.data());
    std::vector<double> x(mi.size());
    for (int a = 0; a < axis_count(); ++a) x[static_cast<std::size_t>(a)] = coord(a, mi[static_cast<std::size_t>(a)]);
    return x;
}

const Eigen::VectorXd& Grid::weights() const {
    std::call_once(weights_once_, [this] {
        weights_.resize(static_cast<Eigen::Index>(size_));
        std::vector<int> mi(static_cast<std::size_t>(axis_count()));
        for (std::size_t i = 0; i < size_; ++i) {
            unflatten(i, mi.data());
            double w = 1.0;
            switch (kind_) {
                case GridKind::radial_1d: {
                    const double r = coord(0, mi[0]);
                    w = unit_sphere_area(N_) * std::pow(r, N_ - 1) * axes_[0].h;
                    break;
                }
                case GridKind::biradial_2d: {
                    const double s = coord(0, mi[0]), t = coord(1, mi[1]);
                    w = 4.0 * pi * pi * s * t * axes_[0].h * axes_[1].h;
                    break;
                }
                case GridKind::biradial_radial_3d: {
                    const double s = coord(0, mi[0]), t = coord(1, mi[1]), r = coord(2, mi[2]);
                    w = 4.0 * pi * pi * s * t * unit_sphere_area(N_ - 4) *
                        std::pow(r, N_ - 5) * axes_[0].h * axes_[1].h * axes_[2].h;
                    break;
                }
                case GridKind::cartesian: {
                    w = std::pow(axes_[0].h, N_);
                    break;
                }
            }
            weights_[static_cast<Eigen::Index>(i)] = w;
        }
    });
    return weights_;
}

void Grid::build_laplacian() const {
    const std::vector<double> coeff = polar_coefficients(kind_, N_);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(size_ * static_cast<std::size_t>(2 * axis_count() + 1));
    std::vector<int> mi(static_cast<std::size_t>(axis_count()));
    for (std::size_t row = 0; row < size_; ++row) {
        unflatten(row, mi.data());
        double diag = 0.0;
        for (int a = 0; a < axis_count(); ++a) {
            const Axis& ax = axes_[static_cast<std::size_t>(a)];
            const double h = ax.h, h2 = h * h;
            const int i = mi[static_cast<std::size_t>(a)];
            const double c = coeff[static_cast<std::size_t>(a)];
            double first = 0.0;
            if (c >= 0.0) first = c / coord(a, i) / (2.0 * h);

            const double lo = 1.0 / h2 - first; // neighbor i-1
            const double hi = 1.0 / h2 + first; // neighbor i+1
            diag += -2.0 / h2;

            auto add = [&](int off, double v) {
                mi[static_cast<std::size_t>(a)] = i + off;
                trip.emplace_back(static_cast<int>(row), static_cast<int>(flatten(mi.data())), v);
                mi[static_cast<std::size_t>(a)] = i;
            };
            if (i > 0) {
                add(-1, lo);
            } else if (is_reduced()) {
                diag += lo; // even reflection: ghost value equals u at first node
            } // cartesian inner edge: clamped, ghost 0
            if (i + 1 < static_cast<int>(ax.n)) add(+1, hi);
            // outer edge: clamped extension, ghost 0
        }
        trip.emplace_back(static_cast<int>(row), static_cast<int>(row), diag);
    }
    lap_.resize(static_cast<Eigen::Index>(size_), static_cast<Eigen::Index>(size_));
    lap_.setFromTriplets(trip.begin(), trip.end());
    lap_.makeCompressed();
}

const Eigen::SparseMatrix<double>& Grid::laplacian_matrix() const {
    std::call_once(lap_once_, [this] { build_laplacian(); });
    return lap_;
}

bool Grid::compatible(const Grid& other) const {
    if (kind_ != other.kind_ || N_ != other.N_ || j_ != other.j_) return false;
    if (axes_.size() != other.axes_.size()) return false;
    for (std::size_t a = 0; a < axes_.size(); ++a)
        if (axes_[a].n != other.axes_[a].n || axes_[a].h != other.axes_[a].h) return false;
    return true;
}

GridPtr make_grid(GridKind kind, int N, int j, double extent, int resolution) {
    return std::make_shared<const Grid>(kind, N, j, extent, resolution);
}

Field make_field(GridPtr grid) {
    Field f;
    f.grid = std::move(grid);
    f.values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(f.grid->size()));
    return f;
}

Field laplacian(const Field& f) {
    Field out;
    out.grid = f.grid;
    out.meta = f.meta;
    out.values = f.grid->laplacian_matrix() * f.values;
    return out;
}

double integrate(const Field& f) { return f.grid->weights().dot(f.values); }

} // namespace lenodal
