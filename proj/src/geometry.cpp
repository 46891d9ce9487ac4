#include "ccrlink/geometry.hpp"

#include <cmath>
#include <numbers>

namespace ccrlink::geometry {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw config_error(what);
}

} // namespace

void LinkGeometry::validate() const {
    require(z > 0.0, "link geometry: z must be > 0");
    require(lambda > 0.0, "link geometry: lambda must be > 0");
    require(a_gs > 0.0, "link geometry: a_gs must be > 0");
    require(a_re > 0.0, "link geometry: a_re must be > 0");
    require(sigma_s >= 0.0, "link geometry: sigma_s must be >= 0");
    require(rho_refl > 0.0 && rho_refl <= 1.0, "link geometry: rho_refl must be in (0, 1]");
    require(p_gs > 0.0, "link geometry: p_gs must be > 0");
    require(p_th > 0.0, "link geometry: p_th must be > 0");
    require(visibility.has_value() != sigma_atm.has_value(),
            "link geometry: exactly one of visibility or sigma_atm must be given");
    require(theta_gs.has_value() != w.has_value(),
            "link geometry: exactly one of theta_gs or w must be given");
    if (visibility) require(*visibility > 0.0, "link geometry: visibility must be > 0");
    if (sigma_atm) require(*sigma_atm >= 0.0, "link geometry: sigma_atm must be >= 0");
    if (theta_gs) require(*theta_gs > 0.0, "link geometry: theta_gs must be > 0");
    if (w) require(*w > 0.0, "link geometry: w must be > 0");
}

CCRLayout::CCRLayout(std::vector<Vec2> positions, double min_spacing) {
    if (positions.empty())
        throw config_error("CCR layout must contain at least one reflector");
    const int m = static_cast<int>(positions.size());
    for (int i = 0; i < m; ++i) {
        const double si = std::hypot(positions[i].x, positions[i].y);
        if (si < min_spacing - 1e-12)
            throw config_error("CCR " + std::to_string(i + 1) +
                               " is closer to the telescope than the minimum spacing");
        for (int j = i + 1; j < m; ++j) {
            const double d = std::hypot(positions[i].x - positions[j].x,
                                        positions[i].y - positions[j].y);
            if (d < min_spacing - 1e-12)
                throw config_error("CCRs " + std::to_string(i + 1) + " and " +
                                   std::to_string(j + 1) + " violate the minimum spacing");
        }
    }
    pos_ = std::move(positions);
    s_.reserve(pos_.size());
    phi_.reserve(pos_.size());
    for (const auto& p : pos_) {
        s_.push_back(std::hypot(p.x, p.y));
        phi_.push_back(std::atan2(p.y, p.x));
    }
}

CCRLayout layout_linear(int m, double spacing, double min_spacing) {
    if (m < 1) throw config_error("layout_linear: m must be >= 1");
    if (!(spacing > 0.0)) throw config_error("layout_linear: spacing must be > 0");
    std::vector<Vec2> pos;
    pos.reserve(m);
    const int n_pos = (m + 1) / 2;
    const int n_neg = m / 2;
    for (int k = 1; k <= n_pos; ++k) {
        pos.push_back({k * spacing, 0.0});
        if (k <= n_neg) pos.push_back({-k * spacing, 0.0});
    }
    return CCRLayout(std::move(pos), min_spacing);
}

CCRLayout layout_circular(int m, double radius, double min_spacing) {
    if (m < 1) throw config_error("layout_circular: m must be >= 1");
    if (!(radius > 0.0)) throw config_error("layout_circular: radius must be > 0");
    std::vector<Vec2> pos;
    pos.reserve(m);
    for (int k = 0; k < m; ++k) {
        const double phi = 2.0 * std::numbers::pi * k / m;
        pos.push_back({radius * std::cos(phi), radius * std::sin(phi)});
    }
    return CCRLayout(std::move(pos), min_spacing);
}

double attenuation_coefficient(double visibility, double lambda) {
    if (!(visibility > 0.0))
        throw domain_error("attenuation_coefficient requires visibility > 0");
    if (!(lambda > 0.0))
        throw domain_error("attenuation_coefficient requires lambda > 0");
    const double v_km = visibility * 1e-3;
    double q;
    if (v_km > 50.0)
        q = 1.6;
    else if (v_km >= 6.0)
        q = 1.3;
    else if (v_km >= 1.0)
        q = 0.16 * v_km + 0.34;
    else if (v_km >= 0.5)
        q = v_km - 0.5;
    else
        q = 0.0;
    return (3.912 / visibility) * std::pow(lambda / 550e-9, -q);
}

DerivedBudget derive_budget(const LinkGeometry& geom) {
    geom.validate();
    DerivedBudget out;
    out.sigma_atm = geom.sigma_atm ? *geom.sigma_atm
                                   : attenuation_coefficient(*geom.visibility, geom.lambda);
    out.w = geom.w ? *geom.w : geom.z * *geom.theta_gs;
    out.theta_re = 1.22 * geom.lambda / geom.a_re;
    out.g_p = 2.0 * geom.a_gs * geom.a_gs / ((geom.z * out.theta_re) * (geom.z * out.theta_re));
    out.a0 = 2.0 * geom.a_re * geom.a_re / (out.w * out.w);
    out.c = 1.34 * geom.a_gs * geom.a_gs * geom.a_re * geom.a_re /
            (geom.z * geom.z * geom.lambda * geom.lambda) *
            std::exp(-2.0 * out.sigma_atm * geom.z) * geom.rho_refl * geom.p_gs;
    if (out.a0 > 1.0)
        out.warnings.push_back("peak pointing gain a0 = " + std::to_string(out.a0) +
                               " exceeds 1; geometry is outside the far-field regime");
    return out;
}

} // namespace ccrlink::geometry
