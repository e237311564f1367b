#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "irsdetect/beamforming.hpp"

namespace irsdetect {

enum class SchemeId { joint_optimal, snr_detector, reflective_only, transmit_only, semi_passive };

enum class DetectorKind { np_optimal, matched_filter };

std::string_view scheme_name(SchemeId id);
std::optional<SchemeId> parse_scheme(std::string_view name);
const std::vector<SchemeId>& all_schemes();

/// Deterministic-signal SNR at the IRS sensors,
/// |alpha|^2 P(theta0) / (|alpha|^2 sum a_n^2 sigma_z^2 + sigma^2).
double sensing_snr(const DesignPoint& design);

/// u1^H (C + sigma^2 I)^-1 u1 = Mr T |alpha|^2 P(theta0) / (sigma^2 + |alpha|^2 Mr sum a_n^2 sigma_z^2).
double deflection(const DesignPoint& design);

/// Matched filter that models reflection noise as interference under both
/// hypotheses: P_D = Q(Q^-1(pfa) - sqrt(2 eps)).
double matched_filter_pd(double deflection, double pfa);

/// Actual false-alarm rate of that matched filter: under H0 there is no
/// reflected noise, so the statistic variance shrinks by 1 / (1 + g).
double matched_filter_false_alarm(double g, double pfa);

struct SchemeResult {
  SchemeId scheme = SchemeId::joint_optimal;
  DetectorKind detector = DetectorKind::np_optimal;
  JointSolution solution;
  double pd = 0.0;          // the scheme's score (pd_exact or matched_filter_pd)
  double deflection = 0.0;  // matched-filter schemes only
};

/// Designs and scores one scheme. `seed` drives the random phases of
/// transmit_only and is ignored by the other schemes.
SchemeResult scheme_solution(SchemeId scheme, const SceneParams& scene,
                             int grid_points = kDefaultGridPoints, std::uint64_t seed = 0);

/// Uniform phases on (0, 2 pi], reproducible from `seed`.
std::vector<double> random_phases(int n, std::uint64_t seed);

}  // namespace irsdetect
