#include "ntnorch/linkbudget.hpp"

#include <cmath>
#include <stdexcept>

#include "ntnorch/constants.hpp"

namespace ntnorch {

double free_space_loss_db(double distance_m, const Carrier& carrier) {
    if (!(distance_m > 0.0))
        throw std::domain_error("free_space_loss_db: distance must be > 0");
    double wavelength_m;
    if (carrier.wavelength_m) {
        wavelength_m = *carrier.wavelength_m;
    } else if (carrier.frequency_hz) {
        wavelength_m = constants::speed_of_light_m_s / *carrier.frequency_hz;
    } else {
        throw std::domain_error("free_space_loss_db: carrier has neither wavelength nor frequency");
    }
    return 20.0 * std::log10(4.0 * M_PI * distance_m / wavelength_m);
}

double received_power_dbm(const LinkBudgetParams& p, double distance_m) {
    return p.transmit_power_dbm + p.tx_gain_dbi - free_space_loss_db(distance_m, p.carrier)
           + p.rx_gain_dbi - p.other_losses_db;
}

double cnr_db(const LinkBudgetParams& p, const RfNoiseParams& n, double distance_m) {
    if (!p.carrier.frequency_hz)
        throw std::invalid_argument("cnr_db: CNR is defined for RF carriers only");
    double noise_dbm =
        10.0 * std::log10(constants::boltzmann_j_k * n.system_noise_temp_k * n.bandwidth_hz) + 30.0;
    return received_power_dbm(p, distance_m) - noise_dbm;
}

bool link_feasible(const LinkClassRules& rules, const LinkBudgetParams& p,
                   const std::optional<RfNoiseParams>& noise, const LinkGeometry& geometry) {
    if (!(geometry.distance_m > 0.0))
        throw std::domain_error("link_feasible: distance must be > 0");
    if (!geometry.visible) return false;
    if (geometry.distance_m > rules.distance_threshold_m) return false;
    if (rules.link_class == LinkClass::optical)
        return received_power_dbm(p, geometry.distance_m) >= rules.required_rx_power_dbm;
    if (!noise)
        throw std::invalid_argument("link_feasible: RF link class requires noise parameters");
    return cnr_db(p, *noise, geometry.distance_m) >= rules.required_cnr_db;
}

}  // namespace ntnorch
