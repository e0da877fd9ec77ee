#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "qha/common.hpp"
#include "qha/multi_index.hpp"

namespace qha {

/// Point z = (x, ξ) of ℝ^{2d}.
struct PhasePoint {
  std::vector<double> x;
  std::vector<double> xi;

  static PhasePoint zero(std::size_t d) { return {std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)}; }
  /// Axis order x_1..x_d, ξ_1..ξ_d.
  static PhasePoint from_axes(const std::vector<double>& coords);

  std::size_t dim() const { return x.size(); }
  std::vector<double> axes() const;
  double norm() const;
  bool is_zero() const;

  PhasePoint operator+(const PhasePoint& o) const;
  PhasePoint operator-(const PhasePoint& o) const;
  PhasePoint operator-() const;
  PhasePoint operator*(double s) const;
};

/// Periodic discretization of phase space.
///
/// Position axes carry n samples with spacing h = L/n on [-L/2, L/2); momentum
/// axes carry the FFT-dual band, spacing 2π/L on [-πn/L, πn/L). The node
/// lattice is therefore closed under the symplectic Fourier transform and is
/// exactly the index set of the finite Weyl system used by the operator code.
class PhaseGrid {
public:
  PhaseGrid(std::size_t d, std::size_t n, double period);

  std::size_t d() const { return d_; }
  std::size_t n() const { return n_; }
  double period() const { return period_; }
  double spacing() const { return period_ / static_cast<double>(n_); }
  double dual_spacing() const { return 2.0 * kPi / period_; }
  std::size_t axes() const { return 2 * d_; }

  std::size_t symbol_size() const { return ipow(n_, 2 * d_); }
  std::size_t position_size() const { return ipow(n_, d_); }

  /// Centered integer coordinate of storage index i: i - n/2.
  long centered(std::size_t i) const { return static_cast<long>(i) - static_cast<long>(n_ / 2); }
  double position(std::size_t i) const { return static_cast<double>(centered(i)) * spacing(); }
  double momentum(std::size_t j) const { return static_cast<double>(centered(j)) * dual_spacing(); }

  double axis_spacing(std::size_t axis) const { return axis < d_ ? spacing() : dual_spacing(); }
  double axis_period(std::size_t axis) const { return axis_spacing(axis) * static_cast<double>(n_); }
  double axis_coordinate(std::size_t axis, std::size_t idx) const {
    return static_cast<double>(centered(idx)) * axis_spacing(axis);
  }

  /// Phase-space cell volume (h · 2π/L)^d = (2π/n)^d.
  double cell_volume() const;

  PhasePoint point(std::size_t flat) const;
  /// Lattice point with the given centered integer coordinates (length 2d).
  PhasePoint lattice_point(const std::vector<long>& centered_coords) const;

  /// Position-space node t_k of a flat position index (length d).
  std::vector<double> position_node(std::size_t flat) const;

  bool operator==(const PhaseGrid& o) const { return d_ == o.d_ && n_ == o.n_ && period_ == o.period_; }

private:
  std::size_t d_;
  std::size_t n_;
  double period_;
};

/// Complex samples of a function on a PhaseGrid, row-major in axis order x_1..x_d, ξ_1..ξ_d.
class Symbol {
public:
  explicit Symbol(PhaseGrid grid);
  Symbol(PhaseGrid grid, ComplexVector values);

  const PhaseGrid& grid() const { return grid_; }
  const ComplexVector& values() const { return values_; }
  ComplexVector& values() { return values_; }
  std::size_t size() const { return values_.size(); }
  Complex operator[](std::size_t i) const { return values_[i]; }
  Complex& operator[](std::size_t i) { return values_[i]; }

  Symbol operator+(const Symbol& o) const;
  Symbol operator-(const Symbol& o) const;
  Symbol operator*(Complex s) const;
  /// Pointwise product.
  Symbol times(const Symbol& o) const;
  Symbol conj() const;

private:
  PhaseGrid grid_;
  ComplexVector values_;
};

double max_abs_diff(const Symbol& a, const Symbol& b);
double max_abs(const Symbol& f);
/// Grid L^p norm with the cell-volume weight; p = ∞ gives the sup over nodes.
double lp_norm(const Symbol& f, double p);

/// σ(z, w) = y·ξ − x·η for z = (x, ξ), w = (y, η).
double symplectic_form(const PhasePoint& z, const PhasePoint& w);

/// α_z f = f(· − z), by FFT phase ramp; arbitrary real offsets.
Symbol shift_function(const Symbol& f, const PhasePoint& z);

/// γ_z f = e^{iσ(z,·)} f.
Symbol modulate_function(const Symbol& f, const PhasePoint& z);

/// Multiplies the 2d-dimensional DFT of f by m(k), where k holds the signed
/// angular frequency per axis (band [-π/h_a, π/h_a)).
Symbol fourier_multiply(const Symbol& f, const std::function<Complex(const std::vector<double>&)>& m);

/// Textbook partial derivative ∂^α f (spectral). The shift-convention derivative
/// lim (α_{te_j} f − f)/t equals (−1)^{|α|} times this.
Symbol symbol_partial(const Symbol& f, const MultiIndex& alpha);

/// Cyclic grid convolution (f ∗ g)(z) = Σ_u f(u) g(z − u) · cell.
Symbol convolve(const Symbol& f, const Symbol& g);

/// Closed-form test symbols.
struct SymbolFamily {
  std::string name;  ///< gaussian | cos_sin | plane_wave | bump | imported
  double width = 1.0;
  double amplitude = 1.0;
  std::optional<PhasePoint> center;     ///< gaussian, bump
  std::optional<PhasePoint> frequency;  ///< plane_wave: e^{iσ(frequency, z)}
  std::filesystem::path source;         ///< imported

  static SymbolFamily gaussian(double width = 1.0, std::optional<PhasePoint> center = {});
  static SymbolFamily cos_sin();
  static SymbolFamily plane_wave(PhasePoint frequency);
  static SymbolFamily bump(double radius, std::optional<PhasePoint> center = {});
  static SymbolFamily imported(std::filesystem::path path);
};

Symbol make_symbol(const SymbolFamily& family, const PhaseGrid& grid);

/// Textbook derivative ∂^β of the closed form at an arbitrary point.
/// Supported for gaussian, cos_sin and plane_wave.
Complex evaluate_family(const SymbolFamily& family, const PhasePoint& z, const MultiIndex& beta);

/// Samples ∂^β of the closed form on the grid.
Symbol sample_family_derivative(const SymbolFamily& family, const MultiIndex& beta, const PhaseGrid& grid);

void export_symbol_csv(const Symbol& f, std::ostream& os);
Symbol import_symbol_csv(std::istream& is);
void export_symbol_csv(const Symbol& f, const std::filesystem::path& path);
Symbol import_symbol_csv(const std::filesystem::path& path);

/// "# <tag> d=.. n=.. L=.." header line shared by the CSV formats.
std::string grid_header(const PhaseGrid& g, std::string_view tag);
PhaseGrid parse_grid_header(const std::string& line, std::string_view tag);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);
double parse_double(std::string_view s);

}  // namespace qha
