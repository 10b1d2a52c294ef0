#pragma once

// Interaction coefficient tables and 1D array geometry.
//
// Units: C3 in GHz*um^3, C6 in GHz*um^6, the Foerster coefficient in
// GHz^2*um^6 (it divides an energy detuning), distances in um, angles in
// degrees, all derived couplings in MHz.  Positive coefficients are repulsive.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mrsim/errors.hpp"

namespace mrsim {

enum class ExchangeChannel { U0, D0, OO };               // |u0><0u|, |d0><0d|, |ud>/|du> <-> |00>
enum class VdwChannel { U0, D0, UU, DD, OO };            // diagonal pair shifts

std::string channel_name(ExchangeChannel c);
std::string channel_name(VdwChannel c);

struct InteractionTable {
    std::map<std::string, double> c3_ghz_um3;   // keys "u0", "d0", "00"
    std::map<std::string, double> c6_ghz_um6;   // keys "u0", "d0", "uu", "dd", "00"
    std::optional<double> forster_c6_ghz2_um6;
    std::optional<double> forster_detuning_mhz;
    std::string species_tag;

    double c3(ExchangeChannel c) const;
    double c6(VdwChannel c) const;
    void validate() const;  // all required channels present
};

struct Geometry {
    int n_sites = 0;
    double spacing_um = 0.0;
    double theta_deg = 0.0;
    std::optional<std::vector<double>> positions_um;  // override uniform spacing when present

    double site_position(int i) const;
    double pair_distance(int i, int j) const;
    double pair_angle_deg(int i, int j) const;  // chain is collinear: every pair sees theta
    void validate() const;
};

// Shipped reference tables (values also live in the JSON fixtures).
InteractionTable rb87_table();
InteractionTable cs133_table();
Geometry rb87_geometry(int n_sites);
Geometry cs133_geometry(int n_sites);

// Construct a table that satisfies the exchange/van-der-Waals matching
// conditions exactly at the given geometry, by inverting the coupling
// formulas: J^{00}=j00 with V^{00}=V^diag=V^ofd=-j00, J^{u0}=V^{u0}=ju0,
// J^{d0}=V^{d0}=jd0.  Same-state C6 channels are free parameters.
InteractionTable make_fine_tuned_table(double a_um, double theta_deg, double delta_mhz,
                                       double j00_mhz, double ju0_mhz, double jd0_mhz,
                                       double c6_uu_ghz_um6 = 0.0, double c6_dd_ghz_um6 = 0.0);

}  // namespace mrsim
