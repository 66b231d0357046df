#pragma once

#include <optional>

namespace ntnorch {

// Exactly one of the two fields is set: wavelength for optical carriers,
// frequency for RF.
struct Carrier {
    std::optional<double> wavelength_m;
    std::optional<double> frequency_hz;

    static Carrier optical(double wavelength_m) { return {wavelength_m, std::nullopt}; }
    static Carrier rf(double frequency_hz) { return {std::nullopt, frequency_hz}; }
};

struct LinkBudgetParams {
    double transmit_power_dbm = 0.0;
    double tx_gain_dbi = 0.0;
    double rx_gain_dbi = 0.0;
    double other_losses_db = 0.0;  // L_s; 0 on inter-satellite links
    Carrier carrier;
};

struct RfNoiseParams {
    double system_noise_temp_k = 0.0;
    double bandwidth_hz = 0.0;
};

enum class LinkClass { optical, rf };

struct LinkClassRules {
    LinkClass link_class = LinkClass::optical;
    double distance_threshold_m = 0.0;     // D_req; use +inf for unlimited classes
    double required_rx_power_dbm = 0.0;    // optical threshold
    double required_cnr_db = 0.0;          // rf threshold
};

struct LinkGeometry {
    bool visible = false;
    double distance_m = 0.0;
};

// 20*log10(4*pi*d/lambda), or the equivalent frequency form.
// Throws std::domain_error for d <= 0 or an unset carrier.
double free_space_loss_db(double distance_m, const Carrier& carrier);

// P_t + G_t - L_f + G_r - L_s, all in dB units.
double received_power_dbm(const LinkBudgetParams& p, double distance_m);

// Received power minus thermal noise power k_B*T_s*B_w (in dBm).
double cnr_db(const LinkBudgetParams& p, const RfNoiseParams& n, double distance_m);

// Visibility, distance threshold and the class's power/CNR condition, with
// boundary equality counting as feasible. RF class without noise parameters
// throws std::invalid_argument.
bool link_feasible(const LinkClassRules& rules, const LinkBudgetParams& p,
                   const std::optional<RfNoiseParams>& noise, const LinkGeometry& geometry);

}  // namespace ntnorch
