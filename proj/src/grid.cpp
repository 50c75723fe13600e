#include "wco/grid.hpp"

#include <numbers>

#include "wco/error.hpp"

namespace wco {

AnnularGrid::AnnularGrid(int m_max, std::size_t base_count)
    : m_max_(m_max), base_count_(base_count) {
    if (m_max < 1 || m_max > 48) throw SpecError("annular grid M_max must lie in [1, 48]");
    if (base_count < 4) throw SpecError("annular grid needs at least 4 angles per circle");
}

std::vector<std::size_t> AnnularGrid::angular_counts() const {
    std::vector<std::size_t> out;
    for (int m = 1; m <= m_max_; ++m) out.push_back(angular_count(m));
    return out;
}

std::vector<std::complex<double>> AnnularGrid::points(int m) const {
    const std::size_t t = angular_count(m);
    const double r = radius(m);
    std::vector<std::complex<double>> pts(t);
    for (std::size_t j = 0; j < t; ++j) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) /
                             static_cast<double>(t);
        pts[j] = std::polar(r, theta);
    }
    return pts;
}

std::vector<std::complex<double>> AnnularGrid::all_points() const {
    std::vector<std::complex<double>> out;
    for (int m = 1; m <= m_max_; ++m) {
        auto p = points(m);
        out.insert(out.end(), p.begin(), p.end());
    }
    return out;
}

}  // namespace wco
