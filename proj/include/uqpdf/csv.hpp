#pragma once

#include <span>
#include <string>
#include <vector>

#include "uqpdf/density.hpp"
#include "uqpdf/kl.hpp"
#include "uqpdf/mc.hpp"
#include "uqpdf/sg.hpp"

namespace uqpdf::csv {

inline constexpr const char* kVersionString = "uqpdf 0.1.0";

// Eigenpair cache keyed by (refinement level, sigma_gamma, corr_length, N,
// a_min, mu_gamma); one row per eigenpair: lambda followed by nodal values.
void save_kl(const KLField& field, const std::string& path);
KLField load_kl(const std::string& path);
bool kl_cache_matches(const std::string& path, int refinement_level,
                      double sigma_gamma, double corr_length, int n_terms,
                      double a_min, double mu_gamma);

// Single-column sample file with seed / count / sigma / kind metadata.
void save_samples(const SampleSet& set, const std::string& path);
SampleSet load_samples(const std::string& path);

// One row per multi-index: the index tuple then beta.
void save_qoi_polynomial(const QoIPolynomial& qoi, double sigma_gamma,
                         const std::string& path);
QoIPolynomial load_qoi_polynomial(const std::string& path);

// Two-column curve with caller-supplied metadata lines (without the leading '#').
void save_curve(std::span<const double> x, std::span<const double> f,
                const std::vector<std::string>& metadata, const std::string& path);

void save_selection_report(const OrderSelectionReport& report, SeriesKind kind,
                           double tol, const std::string& path);

}  // namespace uqpdf::csv
