#pragma once

// Coherence quantifiers in the computational reference basis.

#include <charconv>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nmcoh/error.hpp"
#include "nmcoh/linalg.hpp"

namespace nmcoh {

/// The computational basis {|0>, ..., |dim-1>}. One instance is shared by all
/// measure evaluations of an analysis run.
struct ReferenceBasis {
  std::size_t dim = 2;
};

enum class LogBase { Two, E };

enum class MeasureKind { Skew, Tsallis, ModifiedTsallis, L1, RelativeEntropy };

class CoherenceMeasure {
 public:
  static CoherenceMeasure skew() { return CoherenceMeasure(MeasureKind::Skew, std::nullopt); }
  static CoherenceMeasure l1() { return CoherenceMeasure(MeasureKind::L1, std::nullopt); }
  static CoherenceMeasure relative_entropy(LogBase base = LogBase::Two) {
    CoherenceMeasure m(MeasureKind::RelativeEntropy, std::nullopt);
    m.base_ = base;
    return m;
  }
  static CoherenceMeasure tsallis(double alpha) {
    check_alpha(alpha);
    return CoherenceMeasure(MeasureKind::Tsallis, alpha);
  }
  static CoherenceMeasure modified_tsallis(double alpha) {
    check_alpha(alpha);
    return CoherenceMeasure(MeasureKind::ModifiedTsallis, alpha);
  }

  MeasureKind kind() const noexcept { return kind_; }
  std::optional<double> alpha() const noexcept { return alpha_; }
  LogBase log_base() const noexcept { return base_; }

  /// Column label used in CSV headers and reports, e.g. "mtsallis(0.2)".
  std::string name() const {
    switch (kind_) {
      case MeasureKind::Skew: return "skew";
      case MeasureKind::L1: return "l1";
      case MeasureKind::RelativeEntropy: return base_ == LogBase::Two ? "relent" : "relent_e";
      case MeasureKind::Tsallis: return "tsallis(" + format_alpha(*alpha_) + ")";
      case MeasureKind::ModifiedTsallis: return "mtsallis(" + format_alpha(*alpha_) + ")";
    }
    return "?";
  }

  static void check_alpha(double alpha) {
    require(alpha > 0.0 && alpha <= 2.0 && alpha != 1.0, ErrorCode::AlphaOutOfRange,
            "alpha " + std::to_string(alpha) + " must lie in (0, 2] and differ from 1");
  }

  friend bool operator==(const CoherenceMeasure&, const CoherenceMeasure&) = default;

 private:
  CoherenceMeasure(MeasureKind kind, std::optional<double> alpha) : kind_(kind), alpha_(alpha) {}

  static std::string format_alpha(double a) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, a);
    return std::string(buf, res.ptr);
  }

  MeasureKind kind_;
  std::optional<double> alpha_;
  LogBase base_ = LogBase::Two;
};

namespace detail {

inline void check_basis(const DensityMatrix& rho, const ReferenceBasis& basis) {
  require(rho.dim() == basis.dim, ErrorCode::DimensionMismatch,
          "state dim " + std::to_string(rho.dim()) + " vs basis dim " + std::to_string(basis.dim));
}

inline double shannon(const std::vector<double>& p, LogBase base) {
  double h = 0.0;
  for (double x : p)
    if (x > 0.0) h -= x * std::log(x);
  return base == LogBase::Two ? h / std::log(2.0) : h;
}

// E = sum_j <j|rho^alpha|j>^(1/alpha) - 1. Both Tsallis quantifiers are
// functions of E. For alpha = 2 the diagonal of rho^2 is
// rho_jj^2 + sum_{k!=j} |rho_jk|^2, which gives E without cancellation.
inline double tsallis_excess(const DensityMatrix& rho, double alpha) {
  const std::size_t n = rho.dim();
  if (alpha == 2.0) {
    double e = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double diag = rho(j, j).real();
      double off = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) off += std::norm(rho(j, k));
      const double denom = std::sqrt(diag * diag + off) + diag;
      if (denom > 0.0) e += off / denom;
    }
    return e;
  }
  const ComplexMatrix p = mat_func(rho, alpha);
  std::vector<double> logs;
  logs.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double d = p(j, j).real();
    if (d > 0.0) logs.push_back(std::log(d) / alpha);
  }
  if (logs.empty()) return -1.0;
  double top = -std::numeric_limits<double>::infinity();
  for (double x : logs) top = std::max(top, x);
  double acc = 0.0;
  for (double x : logs) acc += std::exp(x - top);
  return std::expm1(top + std::log(acc));
}

}  // namespace detail

/// Skew-information coherence 1 - sum_j <j|sqrt(rho)|j>^2, evaluated as the
/// equivalent sum of squared off-diagonal moduli of sqrt(rho) (the two agree
/// because tr(sqrt(rho)^2) = 1).
inline double c_skew(const DensityMatrix& rho, const ReferenceBasis& basis) {
  detail::check_basis(rho, basis);
  const ComplexMatrix root = mat_func(rho, 0.5);
  double s = 0.0;
  for (std::size_t i = 0; i < root.dim(); ++i)
    for (std::size_t j = 0; j < root.dim(); ++j)
      if (i != j) s += std::norm(root(i, j));
  return s;
}

inline double c_l1(const DensityMatrix& rho, const ReferenceBasis& basis) {
  detail::check_basis(rho, basis);
  double s = 0.0;
  for (std::size_t i = 0; i < rho.dim(); ++i)
    for (std::size_t j = 0; j < rho.dim(); ++j)
      if (i != j) s += std::abs(rho(i, j));
  return s;
}

/// S(diag rho) - S(rho).
inline double c_relent(const DensityMatrix& rho, const ReferenceBasis& basis, LogBase base = LogBase::Two) {
  detail::check_basis(rho, basis);
  std::vector<double> diag(rho.dim());
  for (std::size_t j = 0; j < rho.dim(); ++j) diag[j] = std::max(rho(j, j).real(), 0.0);
  auto spectrum = eig_hermitian(rho.matrix()).values;
  for (double& v : spectrum) v = std::max(v, 0.0);
  return std::max(0.0, detail::shannon(diag, base) - detail::shannon(spectrum, base));
}

/// Tsallis relative alpha-entropy of coherence,
/// ((sum_j <j|rho^a|j>^(1/a))^a - 1) / (a - 1).
inline double c_tsallis(const DensityMatrix& rho, double alpha, const ReferenceBasis& basis) {
  CoherenceMeasure::check_alpha(alpha);
  detail::check_basis(rho, basis);
  const double e = detail::tsallis_excess(rho, alpha);
  return std::max(0.0, std::expm1(alpha * std::log1p(e)) / (alpha - 1.0));
}

/// Modified Tsallis quantifier (sum_j <j|rho^a|j>^(1/a) - 1) / (a - 1).
inline double c_tsallis_mod(const DensityMatrix& rho, double alpha, const ReferenceBasis& basis) {
  CoherenceMeasure::check_alpha(alpha);
  detail::check_basis(rho, basis);
  return std::max(0.0, detail::tsallis_excess(rho, alpha) / (alpha - 1.0));
}

inline double evaluate(const CoherenceMeasure& m, const DensityMatrix& rho, const ReferenceBasis& basis) {
  switch (m.kind()) {
    case MeasureKind::Skew: return c_skew(rho, basis);
    case MeasureKind::L1: return c_l1(rho, basis);
    case MeasureKind::RelativeEntropy: return c_relent(rho, basis, m.log_base());
    case MeasureKind::Tsallis: return c_tsallis(rho, *m.alpha(), basis);
    case MeasureKind::ModifiedTsallis: return c_tsallis_mod(rho, *m.alpha(), basis);
  }
  return 0.0;
}

/// Parses "skew", "l1", "relent", "relent_e", "tsallis(a)", "mtsallis(a)".
/// An alpha of exactly 1 maps to the natural-log relative entropy.
inline CoherenceMeasure parse_measure(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text == "skew") return CoherenceMeasure::skew();
  if (text == "l1") return CoherenceMeasure::l1();
  if (text == "relent") return CoherenceMeasure::relative_entropy(LogBase::Two);
  if (text == "relent_e") return CoherenceMeasure::relative_entropy(LogBase::E);
  const auto open = text.find('(');
  if (open != std::string_view::npos && text.back() == ')') {
    const auto head = trim(text.substr(0, open));
    const auto arg = trim(text.substr(open + 1, text.size() - open - 2));
    double alpha = 0.0;
    const auto res = std::from_chars(arg.data(), arg.data() + arg.size(), alpha);
    if (res.ec == std::errc{} && res.ptr == arg.data() + arg.size()) {
      if (head == "tsallis" || head == "mtsallis") {
        if (alpha == 1.0) return CoherenceMeasure::relative_entropy(LogBase::E);
        if (!(alpha > 0.0 && alpha <= 2.0)) fail(ErrorCode::Config, "alpha out of (0, 2]: " + std::string(text));
        return head == "tsallis" ? CoherenceMeasure::tsallis(alpha) : CoherenceMeasure::modified_tsallis(alpha);
      }
    }
  }
  fail(ErrorCode::Config, "unknown measure '" + std::string(text) + "'");
}

}  // namespace nmcoh
