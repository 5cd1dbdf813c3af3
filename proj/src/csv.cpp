#include "uqpdf/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>

#include "uqpdf/errors.hpp"

namespace uqpdf::csv {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return in;
}

// Collects key=value pairs from the leading '#' lines.
std::map<std::string, std::string> read_metadata(std::istream& in) {
  std::map<std::string, std::string> meta;
  while (in.peek() == '#') {
    std::string line;
    std::getline(in, line);
    std::istringstream fields(line.substr(1));
    std::string token;
    while (fields >> token) {
      const auto eq = token.find('=');
      if (eq != std::string::npos) {
        meta[token.substr(0, eq)] = token.substr(eq + 1);
      }
    }
  }
  return meta;
}

double meta_double(const std::map<std::string, std::string>& meta,
                   const std::string& key, const std::string& path) {
  const auto it = meta.find(key);
  if (it == meta.end()) throw IoError("'" + path + "' lacks metadata key " + key);
  return std::stod(it->second);
}

long meta_long(const std::map<std::string, std::string>& meta, const std::string& key,
               const std::string& path) {
  const auto it = meta.find(key);
  if (it == meta.end()) throw IoError("'" + path + "' lacks metadata key " + key);
  return std::stol(it->second);
}

}  // namespace

void save_kl(const KLField& field, const std::string& path) {
  auto out = open_out(path);
  out << "# " << kVersionString << " kl_cache v1\n";
  out << "# refinement_level=" << field.refinement_level
      << " sigma_gamma=" << fmt(field.sigma_gamma)
      << " corr_length=" << fmt(field.corr_length)
      << " n_terms=" << field.term_count() << " a_min=" << fmt(field.a_min)
      << " mu_gamma=" << fmt(field.mu_gamma) << " nodes=" << field.node_count()
      << "\n";
  for (int n = 0; n < field.term_count(); ++n) {
    out << fmt(field.eigenvalues(n));
    for (int j = 0; j < field.node_count(); ++j) {
      out << ',' << fmt(field.eigenfunctions(j, n));
    }
    out << '\n';
  }
  if (!out) throw IoError("write to '" + path + "' failed");
}

KLField load_kl(const std::string& path) {
  auto in = open_in(path);
  const auto meta = read_metadata(in);

  KLField field;
  field.refinement_level = static_cast<int>(meta_long(meta, "refinement_level", path));
  field.sigma_gamma = meta_double(meta, "sigma_gamma", path);
  field.corr_length = meta_double(meta, "corr_length", path);
  field.a_min = meta_double(meta, "a_min", path);
  field.mu_gamma = meta_double(meta, "mu_gamma", path);
  const int n_terms = static_cast<int>(meta_long(meta, "n_terms", path));
  const int nodes = static_cast<int>(meta_long(meta, "nodes", path));

  field.eigenvalues.resize(n_terms);
  field.eigenfunctions.resize(nodes, n_terms);
  std::string line;
  for (int n = 0; n < n_terms; ++n) {
    if (!std::getline(in, line)) throw IoError("'" + path + "' ends prematurely");
    std::istringstream row(line);
    std::string cell;
    if (!std::getline(row, cell, ',')) throw IoError("'" + path + "' has a bad row");
    field.eigenvalues(n) = std::stod(cell);
    for (int j = 0; j < nodes; ++j) {
      if (!std::getline(row, cell, ',')) throw IoError("'" + path + "' has a bad row");
      field.eigenfunctions(j, n) = std::stod(cell);
    }
  }
  return field;
}

bool kl_cache_matches(const std::string& path, int refinement_level,
                      double sigma_gamma, double corr_length, int n_terms,
                      double a_min, double mu_gamma) {
  std::ifstream in(path);
  if (!in) return false;
  const auto meta = read_metadata(in);
  try {
    return meta_long(meta, "refinement_level", path) == refinement_level &&
           meta_double(meta, "sigma_gamma", path) == sigma_gamma &&
           meta_double(meta, "corr_length", path) == corr_length &&
           meta_long(meta, "n_terms", path) == n_terms &&
           meta_double(meta, "a_min", path) == a_min &&
           meta_double(meta, "mu_gamma", path) == mu_gamma;
  } catch (const IoError&) {
    return false;
  }
}

void save_samples(const SampleSet& set, const std::string& path) {
  auto out = open_out(path);
  out << "# " << kVersionString << " samples v1\n";
  out << "# seed=" << set.seed << " M=" << set.count()
      << " sigma_gamma=" << fmt(set.sigma_gamma)
      << " qoi_kind=" << to_string(set.qoi_kind) << "\n";
  out << "value\n";
  for (const double v : set.values) out << fmt(v) << '\n';
  if (!out) throw IoError("write to '" + path + "' failed");
}

SampleSet load_samples(const std::string& path) {
  auto in = open_in(path);
  const auto meta = read_metadata(in);

  SampleSet set;
  set.seed = static_cast<std::uint64_t>(meta_long(meta, "seed", path));
  set.sigma_gamma = meta_double(meta, "sigma_gamma", path);
  const auto kind = meta.find("qoi_kind");
  if (kind == meta.end()) throw IoError("'" + path + "' lacks metadata key qoi_kind");
  set.qoi_kind = qoi_kind_from_string(kind->second);

  const long count = meta_long(meta, "M", path);
  std::string line;
  std::getline(in, line);  // column header
  set.values.reserve(static_cast<size_t>(count));
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    set.values.push_back(std::stod(line));
  }
  if (static_cast<long>(set.values.size()) != count) {
    throw IoError("'" + path + "' promises " + std::to_string(count) + " samples, has " +
                  std::to_string(set.values.size()));
  }
  return set;
}

void save_qoi_polynomial(const QoIPolynomial& qoi, double sigma_gamma,
                         const std::string& path) {
  auto out = open_out(path);
  out << "# " << kVersionString << " qoi_polynomial v1\n";
  out << "# N=" << qoi.index_set.dim << " p=" << qoi.index_set.max_degree
      << " qoi_kind=" << to_string(qoi.qoi_kind)
      << " sigma_gamma=" << fmt(sigma_gamma) << "\n";
  for (int d = 0; d < qoi.index_set.dim; ++d) out << "p_" << (d + 1) << ',';
  out << "beta\n";
  for (int k = 0; k < qoi.index_set.size(); ++k) {
    for (int d = 0; d < qoi.index_set.dim; ++d) {
      out << qoi.index_set[k][static_cast<size_t>(d)] << ',';
    }
    out << fmt(qoi.beta(k)) << '\n';
  }
  if (!out) throw IoError("write to '" + path + "' failed");
}

QoIPolynomial load_qoi_polynomial(const std::string& path) {
  auto in = open_in(path);
  const auto meta = read_metadata(in);
  const int dim = static_cast<int>(meta_long(meta, "N", path));
  const int degree = static_cast<int>(meta_long(meta, "p", path));
  const auto kind = meta.find("qoi_kind");
  if (kind == meta.end()) throw IoError("'" + path + "' lacks metadata key qoi_kind");

  QoIPolynomial qoi;
  qoi.index_set = multi_index_set(dim, degree);
  qoi.qoi_kind = qoi_kind_from_string(kind->second);
  qoi.beta.resize(qoi.index_set.size());

  std::string line;
  std::getline(in, line);  // column header
  for (int k = 0; k < qoi.index_set.size(); ++k) {
    if (!std::getline(in, line)) throw IoError("'" + path + "' ends prematurely");
    std::istringstream row(line);
    std::string cell;
    for (int d = 0; d < dim; ++d) {
      if (!std::getline(row, cell, ',')) throw IoError("'" + path + "' has a bad row");
      if (std::stoi(cell) != qoi.index_set[k][static_cast<size_t>(d)]) {
        throw IoError("'" + path + "' index ordering does not match the canonical one");
      }
    }
    if (!std::getline(row, cell, ',')) throw IoError("'" + path + "' has a bad row");
    qoi.beta(k) = std::stod(cell);
  }
  return qoi;
}

void save_curve(std::span<const double> x, std::span<const double> f,
                const std::vector<std::string>& metadata, const std::string& path) {
  if (x.size() != f.size()) throw DimensionError("curve columns differ in length");
  auto out = open_out(path);
  out << "# " << kVersionString << " curve v1\n";
  for (const auto& line : metadata) out << "# " << line << '\n';
  out << "x,f\n";
  char buf[64];
  for (size_t i = 0; i < x.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.6g,%.6g\n", x[i], f[i]);
    out << buf;
  }
  if (!out) throw IoError("write to '" + path + "' failed");
}

void save_selection_report(const OrderSelectionReport& report, SeriesKind kind,
                           double tol, const std::string& path) {
  auto out = open_out(path);
  out << "# " << kVersionString << " selection_report v1\n";
  out << "# kind=" << to_string(kind) << " tol=" << fmt(tol) << " branch="
      << (report.branch == SelectionBranch::convergent ? "convergent" : "divergent")
      << " chosen_order=" << report.chosen_order
      << " mean=" << fmt(report.standardization_mean)
      << " stddev=" << fmt(report.standardization_stddev) << "\n";
  out << "order,successive_l2,histogram_distance,chosen\n";
  char buf[96];
  for (size_t i = 0; i < report.orders.size(); ++i) {
    const double hist = i < report.histogram_distance.size()
                            ? report.histogram_distance[i]
                            : std::numeric_limits<double>::quiet_NaN();
    std::snprintf(buf, sizeof(buf), "%d,%.6g,%.6g,%d\n", report.orders[i],
                  report.successive_l2[i], hist,
                  report.orders[i] == report.chosen_order ? 1 : 0);
    out << buf;
  }
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace uqpdf::csv
