#pragma once

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "schwarz/errors.hpp"
#include "schwarz/jet.hpp"

// Sampling grids on the unit disk. Field comparisons, construction-time
// validation and the CLI all sweep the same kind of polar grid: a list of
// radii crossed with equally spaced angles, plus optional explicit points.
// Points are ordered by radius, then angle, then the extra points in the
// order given; the ordering is part of the output contract.

namespace schwarz {

struct GridSpec {
    std::vector<double> radii;
    int angles = 16;
    std::vector<complexd> extra;

    GridSpec(std::vector<double> radii_, int angles_, std::vector<complexd> extra_ = {})
        : radii(std::move(radii_)), angles(angles_), extra(std::move(extra_)) {
        if (angles < 1) {
            throw ValidationError("grid needs at least one angle");
        }
        for (double r : radii) {
            if (!(r > 0.0) || !(r < 1.0)) {
                std::ostringstream os;
                os << "grid radius " << r << " outside (0, 1)";
                throw ValidationError(os.str());
            }
        }
        for (complexd p : extra) {
            if (!(std::abs(p) < 1.0)) {
                std::ostringstream os;
                os << "grid point (" << p.real() << ", " << p.imag() << ") not inside the disk";
                throw ValidationError(os.str());
            }
        }
    }

    // Radii 0.1, 0.2, ..., 0.8 and 16 angles: 128 points. The sweep stops
    // at radius 0.8 on purpose; closer to the boundary the quantities blow
    // up like powers of 1/(1 - |z|^2) and comparisons stop being
    // informative at fixed tolerances. Callers who need boundary behaviour
    // can pass explicit radii.
    static GridSpec defaults() {
        return GridSpec({0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8}, 16);
    }

    // Finer sweep used for soundness re-checks: step 0.05 up to 0.8, 32 angles.
    static GridSpec fine() {
        std::vector<double> radii;
        for (int k = 1; k <= 16; ++k) radii.push_back(0.05 * k);
        return GridSpec(std::move(radii), 32);
    }

    std::vector<complexd> points() const {
        std::vector<complexd> pts;
        pts.reserve(radii.size() * static_cast<std::size_t>(angles) + extra.size());
        for (double r : radii) {
            for (int k = 0; k < angles; ++k) {
                const double theta = 2.0 * std::numbers::pi * k / angles;
                pts.emplace_back(r * std::cos(theta), r * std::sin(theta));
            }
        }
        pts.insert(pts.end(), extra.begin(), extra.end());
        return pts;
    }
};

// The grid every constructor validates against. Computed once.
inline const std::vector<complexd>& default_grid() {
    static const std::vector<complexd> pts = GridSpec::defaults().points();
    return pts;
}

} // namespace schwarz
