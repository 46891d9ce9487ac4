#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ccrlink/errors.hpp"

namespace ccrlink::geometry {

/// Physical link-budget inputs. Exactly one of {visibility, sigma_atm} and
/// exactly one of {theta_gs, w} must be set.
struct LinkGeometry {
    double z = 0.0;        // propagation distance [m]
    double lambda = 0.0;   // wavelength [m]
    double a_gs = 0.0;     // ground-station telescope radius [m]
    double a_re = 0.0;     // CCR effective radius [m]
    std::optional<double> visibility; // [m]
    std::optional<double> sigma_atm;  // attenuation coefficient [1/m]
    std::optional<double> theta_gs;   // uplink divergence angle [rad]
    std::optional<double> w;          // uplink beamwidth at range z [m]
    double sigma_s = 0.0;  // jitter std dev on the footprint plane [m]
    double rho_refl = 1.0; // reflection effect, in (0, 1]
    double p_gs = 0.0;     // ground-station transmit power [W]
    double p_th = 0.0;     // optical threshold power [W]

    void validate() const; // throws config_error on inconsistency
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

/// Positions of the M corner-cube reflectors on the beam-footprint plane,
/// with the communication telescope at the origin. Construction enforces the
/// minimum spacing floor between every pair and between each CCR and the
/// origin.
class CCRLayout {
  public:
    static constexpr double kDefaultMinSpacing = 1.4142135623730951; // sqrt(2) m

    explicit CCRLayout(std::vector<Vec2> positions,
                       double min_spacing = kDefaultMinSpacing);

    int size() const { return static_cast<int>(pos_.size()); }
    const std::vector<Vec2>& positions() const { return pos_; }
    double radius(int i) const { return s_[i]; }  // |s_i|
    double angle(int i) const { return phi_[i]; } // arg(s_i)

  private:
    std::vector<Vec2> pos_;
    std::vector<double> s_;
    std::vector<double> phi_;
};

/// M reflectors at +/-spacing, +/-2*spacing, ... along the x axis, origin
/// excluded. Odd M puts the extra reflector on the positive side.
CCRLayout layout_linear(int m, double spacing,
                        double min_spacing = CCRLayout::kDefaultMinSpacing);

/// M reflectors equally spaced on the circle of the given radius.
CCRLayout layout_circular(int m, double radius,
                          double min_spacing = CCRLayout::kDefaultMinSpacing);

/// Derived link-budget constants.
struct DerivedBudget {
    double c = 0.0;        // link constant, includes rho_refl and P_GS
    double a0 = 0.0;       // peak pointing gain
    double w = 0.0;        // beamwidth at range z [m]
    double theta_re = 0.0; // reflected-beam divergence [rad]
    double g_p = 0.0;      // downlink pointing-gain constant
    double sigma_atm = 0.0; // resolved attenuation coefficient [1/m]
    std::vector<std::string> warnings;
};

/// Kim's piecewise visibility model: attenuation coefficient from visibility
/// V [m] and wavelength [m].
double attenuation_coefficient(double visibility, double lambda);

DerivedBudget derive_budget(const LinkGeometry& geom);

} // namespace ccrlink::geometry
