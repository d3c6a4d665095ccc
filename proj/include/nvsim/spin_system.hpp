#pragma once

// Spin species, static field, hyperfine couplings and the spin system
// description shared by the sampling and evolution layers.
//
// The NV electron is an effective two-level system on the driven
// {ms=0, ms=-1} pair. Hyperfine couplings use the secular two-scalar form
// and act only in the ms=-1 branch:
//
//   H_hf = sum_i |ms=-1><ms=-1| (x) (Apar_i Iz_i + Aperp_i Ix_i)

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nvsim/constants.hpp"

namespace nvsim {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Vec3 = std::array<double, 3>;

inline double norm(const Vec3& v) {
    return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

struct SpinSpecies {
    std::string name = "13C";
    double spin_quantum_number = 0.5;
    double gyromagnetic_ratio_khz_per_gauss =
        constants::gamma_c13_khz_per_gauss;

    void validate() const {
        if (!std::isfinite(gyromagnetic_ratio_khz_per_gauss) ||
            gyromagnetic_ratio_khz_per_gauss == 0.0)
            throw Error("SpinSpecies: gyromagnetic ratio must be finite and "
                        "nonzero");
        if (spin_quantum_number != 0.5)
            throw Error("SpinSpecies: only spin-1/2 nuclei are supported");
    }
};

inline SpinSpecies carbon13() { return SpinSpecies{}; }

struct StaticField {
    double magnitude_gauss = constants::default_b0_gauss;
    Vec3 direction{0.0, 0.0, 1.0}; // along the NV axis

    void validate() const {
        if (!(magnitude_gauss >= 0.0))
            throw Error("StaticField: magnitude must be >= 0");
        if (std::abs(norm(direction) - 1.0) > 1e-12)
            throw Error("StaticField: direction must be a unit vector");
    }
};

struct HyperfineTensor {
    double a_parallel_khz = 0.0;
    double a_perpendicular_khz = 0.0;

    void validate() const {
        if (!std::isfinite(a_parallel_khz) ||
            !std::isfinite(a_perpendicular_khz))
            throw Error("HyperfineTensor: components must be finite");
    }
};

struct NuclearSpinSite {
    Vec3 position_nm{0.0, 0.0, 1.0}; // NV at origin, z along NV axis
    SpinSpecies species = carbon13();
    HyperfineTensor hyperfine;
    bool first_shell = false;

    void validate() const {
        if (norm(position_nm) <= 0.05)
            throw Error("NuclearSpinSite: site coincides with the NV");
        species.validate();
        hyperfine.validate();
    }
};

struct RelaxationParams {
    std::optional<double> nv_t1_ms;
    std::optional<double> nv_t2_us;
    std::optional<double> nuclear_t1_ms;
    std::optional<double> nuclear_t2_ms;

    void validate() const {
        for (const auto& v :
             {nv_t1_ms, nv_t2_us, nuclear_t1_ms, nuclear_t2_ms})
            if (v && !(*v > 0.0))
                throw Error("RelaxationParams: time constants must be > 0");
    }
    bool any() const {
        return nv_t1_ms || nv_t2_us || nuclear_t1_ms || nuclear_t2_ms;
    }
};

struct SpinSystemSpec {
    StaticField field;
    std::vector<NuclearSpinSite> sites;
    RelaxationParams relaxation;
    int max_exact_spins = constants::default_max_exact_spins;

    int n_sites() const { return int(sites.size()); }
    int dimension() const { return 2 << n_sites(); } // 2 * 2^n

    void validate() const {
        field.validate();
        relaxation.validate();
        for (const auto& s : sites) s.validate();
        if (n_sites() > max_exact_spins)
            throw Error("SpinSystemSpec: " + std::to_string(n_sites()) +
                        " sites exceed the exact-evolution cap of " +
                        std::to_string(max_exact_spins));
    }
};

// ---------------------------------------------------------------------------
// Frequencies and couplings
// ---------------------------------------------------------------------------

inline double larmor_frequency_khz(const SpinSpecies& species,
                                   const StaticField& field) {
    species.validate();
    field.validate();
    return species.gyromagnetic_ratio_khz_per_gauss * field.magnitude_gauss;
}

// Point-dipole parameters. The inversion assumes the polar angle at which
// the two secular components are equal, tan(theta) = (sqrt(17)-3)/2; the
// experimentally quoted couplings have Apar ~ Aperp, which an on-axis site
// cannot produce (Aperp vanishes on axis).
struct DipoleModel {
    double gamma_e_khz_per_gauss = constants::gamma_electron_khz_per_gauss;
    double gamma_n_khz_per_gauss = constants::gamma_c13_khz_per_gauss;
    double validity_floor_nm = constants::point_dipole_floor_nm;
    double assumed_tan_theta = (std::sqrt(17.0) - 3.0) / 2.0;

    double coefficient_khz_nm3() const {
        return constants::dipolar_coefficient_khz_nm3(gamma_e_khz_per_gauss,
                                                      gamma_n_khz_per_gauss);
    }
    // Angular factors at the assumed angle.
    double g_parallel() const {
        const double c2 = 1.0 / (1.0 + assumed_tan_theta * assumed_tan_theta);
        return 3.0 * c2 - 1.0;
    }
    double g_perpendicular() const {
        const double c2 = 1.0 / (1.0 + assumed_tan_theta * assumed_tan_theta);
        return 3.0 * assumed_tan_theta * c2;
    }
};

inline HyperfineTensor point_dipole_hyperfine(const Vec3& position_nm,
                                              const DipoleModel& model = {}) {
    const double r = norm(position_nm);
    if (r < model.validity_floor_nm)
        throw Error("point_dipole_hyperfine: |r| = " + std::to_string(r) +
                    " nm is below the point-dipole validity floor; use the "
                    "tabulated first-shell coupling instead");
    const double c = position_nm[2] / r;
    const double s2 = std::max(0.0, 1.0 - c * c);
    const double b = model.coefficient_khz_nm3() / (r * r * r);
    HyperfineTensor hf;
    hf.a_parallel_khz = b * (3.0 * c * c - 1.0);
    hf.a_perpendicular_khz = b * 3.0 * std::sqrt(s2) * std::abs(c);
    return hf;
}

inline double distance_from_hyperfine_nm(const HyperfineTensor& hf,
                                         const DipoleModel& model = {}) {
    const double a_rms = std::sqrt((hf.a_parallel_khz * hf.a_parallel_khz +
                                    hf.a_perpendicular_khz *
                                        hf.a_perpendicular_khz) /
                                   2.0);
    if (a_rms == 0.0)
        throw Error("distance_from_hyperfine: zero tensor has no solution");
    const double gp = model.g_parallel();
    const double gq = model.g_perpendicular();
    const double g_rms = std::sqrt((gp * gp + gq * gq) / 2.0);
    return std::cbrt(model.coefficient_khz_nm3() * g_rms / a_rms);
}

// Position at the model's assumed angle, for round-tripping with
// distance_from_hyperfine.
inline Vec3 assumed_angle_position(double r_nm, const DipoleModel& model = {}) {
    const double t = model.assumed_tan_theta;
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;
    return Vec3{r_nm * s, 0.0, r_nm * c};
}

// Dipolar field of the NV electron at a site (z component, gauss) and its
// radial gradient (G/nm). ms=0 carries no moment.
struct NvField {
    double bz_gauss = 0.0;
    double dbz_dr_gauss_per_nm = 0.0;
};

inline NvField nv_field_at(const Vec3& position_nm, int ms_level,
                           const DipoleModel& model = {}) {
    if (ms_level != 0 && ms_level != -1)
        throw Error("nv_field_at: ms level must be 0 or -1");
    if (ms_level == 0) return {};
    const HyperfineTensor hf = point_dipole_hyperfine(position_nm, model);
    NvField f;
    f.bz_gauss = hf.a_parallel_khz / model.gamma_n_khz_per_gauss;
    f.dbz_dr_gauss_per_nm = -3.0 * f.bz_gauss / norm(position_nm);
    return f;
}

inline double gradient_broadening_khz(double gradient_gauss_per_nm,
                                      double extent_nm,
                                      const SpinSpecies& species) {
    if (gradient_gauss_per_nm < 0.0 || extent_nm < 0.0)
        throw Error("gradient_broadening: inputs must be >= 0");
    return gradient_gauss_per_nm * extent_nm *
           species.gyromagnetic_ratio_khz_per_gauss;
}

inline double linewidth_from_t2star_khz(double t2star_ms) {
    if (!(t2star_ms > 0.0))
        throw Error("linewidth_from_t2star: T2* must be > 0");
    return 1.0 / (constants::pi * t2star_ms);
}

} // namespace nvsim
