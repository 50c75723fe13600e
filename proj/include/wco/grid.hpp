#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace wco {

/// Circles |z| = 1 - 2^-m, m = 1..m_max, sampled at T_m equally spaced angles
/// (T_m = base_count for m <= 8, doubled beyond). Used to stand in for "sup over the disc"
/// and "limit as |z| -> 1".
class AnnularGrid {
public:
    explicit AnnularGrid(int m_max = 14, std::size_t base_count = 256);

    int m_max() const { return m_max_; }
    std::size_t base_count() const { return base_count_; }

    double radius(int m) const { return 1.0 - std::ldexp(1.0, -m); }
    /// 1 - r_m^2 computed without cancellation.
    double one_minus_r_sq(int m) const {
        const double d = std::ldexp(1.0, -m);
        return d * (2.0 - d);
    }
    std::size_t angular_count(int m) const { return m > 8 ? 2 * base_count_ : base_count_; }
    std::vector<std::size_t> angular_counts() const;

    /// Sample points on annulus m, starting at angle 0.
    std::vector<std::complex<double>> points(int m) const;
    /// All sample points, annulus by annulus.
    std::vector<std::complex<double>> all_points() const;

private:
    int m_max_;
    std::size_t base_count_;
};

}  // namespace wco
