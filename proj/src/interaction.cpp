#include "mrsim/interaction.hpp"

#include <cmath>

namespace mrsim {

std::string channel_name(ExchangeChannel c) {
    switch (c) {
        case ExchangeChannel::U0: return "u0";
        case ExchangeChannel::D0: return "d0";
        case ExchangeChannel::OO: return "00";
    }
    return "?";
}

std::string channel_name(VdwChannel c) {
    switch (c) {
        case VdwChannel::U0: return "u0";
        case VdwChannel::D0: return "d0";
        case VdwChannel::UU: return "uu";
        case VdwChannel::DD: return "dd";
        case VdwChannel::OO: return "00";
    }
    return "?";
}

double InteractionTable::c3(ExchangeChannel c) const {
    const auto it = c3_ghz_um3.find(channel_name(c));
    if (it == c3_ghz_um3.end()) throw ConfigError("interactions.c3_ghz_um3." + channel_name(c) + " missing");
    return it->second;
}

double InteractionTable::c6(VdwChannel c) const {
    const auto it = c6_ghz_um6.find(channel_name(c));
    if (it == c6_ghz_um6.end()) throw ConfigError("interactions.c6_ghz_um6." + channel_name(c) + " missing");
    return it->second;
}

void InteractionTable::validate() const {
    for (ExchangeChannel c : {ExchangeChannel::U0, ExchangeChannel::D0, ExchangeChannel::OO}) (void)c3(c);
    for (VdwChannel c : {VdwChannel::U0, VdwChannel::D0, VdwChannel::UU, VdwChannel::DD, VdwChannel::OO}) (void)c6(c);
    if (forster_c6_ghz2_um6.has_value() != forster_detuning_mhz.has_value())
        throw ConfigError("interactions: forster_c6_ghz2_um6 and forster_detuning_mhz must be given together");
}

double Geometry::site_position(int i) const {
    if (i < 0 || i >= n_sites) throw DomainError("site_position: site out of range");
    if (positions_um) return (*positions_um)[static_cast<size_t>(i)];
    return spacing_um * i;
}

double Geometry::pair_distance(int i, int j) const {
    const double d = std::abs(site_position(i) - site_position(j));
    if (d <= 0.0) throw DomainError("pair_distance: coincident sites");
    return d;
}

double Geometry::pair_angle_deg(int i, int j) const {
    (void)i;
    (void)j;
    return theta_deg;
}

void Geometry::validate() const {
    if (n_sites < 1) throw ConfigError("geometry.n_sites must be >= 1");
    if (positions_um) {
        if (static_cast<int>(positions_um->size()) != n_sites)
            throw ConfigError("geometry.positions_um must list one position per site");
    } else if (spacing_um <= 0.0) {
        throw ConfigError("geometry.spacing_um must be > 0");
    }
}

InteractionTable rb87_table() {
    InteractionTable t;
    t.species_tag = "Rb87 60S/70S/65P";
    t.c3_ghz_um3 = {{"u0", -26.363}, {"d0", -28.711}, {"00", -27.512}};
    t.c6_ghz_um6 = {{"u0", 3883.332}, {"d0", 2766.837}, {"uu", 4648.377}, {"dd", 3878.318}, {"00", 1484.518}};
    return t;
}

InteractionTable cs133_table() {
    InteractionTable t;
    t.species_tag = "Cs133 fine-tuned Rydberg pair";
    t.c3_ghz_um3 = {{"u0", 13.369}, {"d0", 13.966}, {"00", 16.763}};
    t.c6_ghz_um6 = {{"u0", 621.365}, {"d0", 480.496}, {"uu", 3157.912}, {"dd", 3656.713}, {"00", -437.895}};
    t.forster_c6_ghz2_um6 = 420.38;
    t.forster_detuning_mhz = -223.2;
    return t;
}

Geometry rb87_geometry(int n_sites) { return Geometry{n_sites, 7.0, 35.1, std::nullopt}; }
Geometry cs133_geometry(int n_sites) { return Geometry{n_sites, 8.69, 9.376, std::nullopt}; }

InteractionTable make_fine_tuned_table(double a_um, double theta_deg, double delta_mhz,
                                       double j00_mhz, double ju0_mhz, double jd0_mhz,
                                       double c6_uu_ghz_um6, double c6_dd_ghz_um6) {
    const double th = theta_deg * M_PI / 180.0;
    const double ang = 3.0 * std::cos(th) * std::cos(th) - 1.0;
    const double a3 = a_um * a_um * a_um;
    const double a6 = a3 * a3;
    // J[MHz] = 0.5 * c3 * ang / a^3 * 1e3  =>  c3 = J * a^3 / (0.5 * ang * 1e3)
    auto c3_for = [&](double j) { return j * a3 / (0.5 * ang * 1e3); };
    // V[MHz] = c6 / a^6 * 1e3  =>  c6 = V * a^6 / 1e3
    auto c6_for = [&](double v) { return v * a6 / 1e3; };
    // Vf[MHz] = 9 s^2 c^2 * (1e6 * c6f / a^6) / delta  =>  c6f = Vf * a^6 * delta / (9 s^2 c^2 * 1e6)
    const double s2c2 = std::sin(th) * std::sin(th) * std::cos(th) * std::cos(th);
    const double c6f_for_v = (-j00_mhz) * a6 * delta_mhz / (9.0 * s2c2 * 1e6);

    InteractionTable t;
    t.species_tag = "synthetic exactly-tuned";
    t.c3_ghz_um3 = {{"u0", c3_for(ju0_mhz)}, {"d0", c3_for(jd0_mhz)}, {"00", c3_for(j00_mhz)}};
    t.c6_ghz_um6 = {{"u0", c6_for(ju0_mhz)},
                    {"d0", c6_for(jd0_mhz)},
                    {"uu", c6_uu_ghz_um6},
                    {"dd", c6_dd_ghz_um6},
                    {"00", c6_for(-j00_mhz)}};
    t.forster_c6_ghz2_um6 = c6f_for_v;
    t.forster_detuning_mhz = delta_mhz;
    return t;
}

}  // namespace mrsim
