#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "epsmatch/rng.hpp"

namespace epsmatch {

/// Dense row-major n x cols matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  [[nodiscard]] std::span<const double> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }
  [[nodiscard]] std::span<const double> data() const noexcept { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Random two-sided market: n firms, n+k workers. Firm i ranks workers by
/// increasing x(i, j); worker j ranks firms by increasing y(i, j).
/// Indices are 0-based internally.
class Market {
 public:
  /// Validates shape, the open-interval range of every entry, and absence of
  /// ties within X rows and Y columns.
  Market(std::size_t n, std::size_t k, Matrix x, Matrix y);

  [[nodiscard]] std::size_t firms() const noexcept { return n_; }
  [[nodiscard]] std::size_t workers() const noexcept { return n_ + k_; }
  [[nodiscard]] std::size_t imbalance() const noexcept { return k_; }
  [[nodiscard]] const Matrix& x() const noexcept { return x_; }
  [[nodiscard]] const Matrix& y() const noexcept { return y_; }

  friend bool operator==(const Market&, const Market&) = default;

 private:
  std::size_t n_;
  std::size_t k_;
  Matrix x_;
  Matrix y_;
};

/// Injection of firms into workers; assignment[i] is the worker matched to firm i.
class Matching {
 public:
  Matching(std::vector<std::size_t> assignment, std::size_t workers);

  /// Firm i matched to worker i.
  static Matching diagonal(std::size_t n, std::size_t workers);

  [[nodiscard]] std::size_t firms() const noexcept { return assignment_.size(); }
  [[nodiscard]] std::size_t workers() const noexcept { return firm_of_.size(); }
  [[nodiscard]] std::size_t partner_of_firm(std::size_t firm) const { return assignment_.at(firm); }
  /// Firm matched to `worker`, or nullopt for an unmatched worker.
  [[nodiscard]] std::optional<std::size_t> partner_of_worker(std::size_t worker) const;
  [[nodiscard]] std::span<const std::size_t> assignment() const noexcept { return assignment_; }

  friend bool operator==(const Matching& a, const Matching& b) {
    return a.assignment_ == b.assignment_ && a.firm_of_.size() == b.firm_of_.size();
  }
  friend auto operator<=>(const Matching& a, const Matching& b) {
    return a.assignment_ <=> b.assignment_;
  }

 private:
  static constexpr std::size_t kUnmatched = static_cast<std::size_t>(-1);
  std::vector<std::size_t> assignment_;
  std::vector<std::size_t> firm_of_;
};

/// Switching-cost threshold eps and rate lambda, with the derived discounts
/// p = exp(-2 eps lambda) and q = exp(-eps lambda).
class EpsParams {
 public:
  /// Throws InvalidArgument unless eps >= 0 and lambda > 0.
  EpsParams(double eps, double lambda);

  /// Builds parameters with caller-supplied p and q and no checks; used to
  /// exercise validate().
  static EpsParams unchecked(double eps, double lambda, double p, double q) noexcept;

  /// Throws InvalidArgument if any invariant (0 < p <= 1, q*q == p,
  /// eps == 0 implies p == 1) is violated.
  void validate() const;

  [[nodiscard]] double eps() const noexcept { return eps_; }
  [[nodiscard]] double lambda() const noexcept { return lambda_; }
  [[nodiscard]] double p() const noexcept { return p_; }
  [[nodiscard]] double q() const noexcept { return q_; }

 private:
  EpsParams() = default;
  double eps_ = 0.0;
  double lambda_ = 1.0;
  double p_ = 1.0;
  double q_ = 1.0;
};

enum class Side { Firm, Worker };

/// Draws i.i.d. uniform (0,1) entries: X row-major first, then Y.
Market generate_market(std::size_t n, std::size_t k, Seed seed);

/// Opposite-side indices, most preferred (smallest entry) first.
std::vector<std::size_t> preference_order(const Market& market, Side side, std::size_t index);

/// (1/lambda) ln(1/entry) for entry in (0,1).
double utility(double entry, double lambda);

}  // namespace epsmatch
