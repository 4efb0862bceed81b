#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace stsbc {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;

// The four space-time block codes under comparison. ThreeD is the
// double-layer inter-site/intra-site code; the others are single layer.
enum class SchemeId { Alamouti, SpatialMux, Golden, ThreeD };

struct SchemeDims {
  int n_tx;    // transmit antennas (site-major: site-1 antennas first)
  int n_time;  // time slots per codeword
  int n_syms;  // complex symbols per codeword
};

SchemeDims scheme_dims(SchemeId id);
const char* scheme_name(SchemeId id);
SchemeId scheme_from_name(std::string_view name);  // throws std::invalid_argument

struct Rational {
  long num = 0;
  long den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// Symbols per channel use: Alamouti 1, SpatialMux 2, Golden 2, ThreeD 2.
Rational code_rate(SchemeId id);

// Constants of the Golden code construction.
struct CodeConstants {
  double theta;      // (1+sqrt5)/2
  double theta_bar;  // 1 - theta
  cplx alpha;        // 1 + j(1-theta)
  cplx alpha_bar;    // 1 + j(1-theta_bar)
  cplx mu;           // j, the phase on the second-row entries
  double scale;      // 1/sqrt5
};
const CodeConstants& golden_constants();

struct Codeword {
  CMat entries;  // n_tx x n_time
  SchemeId scheme;
};

// Base constructions. Each has unit average energy per antenna per slot
// for unit-average-energy inputs; the transmit power normalisation is a
// separate factor (power_scale) applied by encode().
CMat alamouti_matrix(cplx s1, cplx s2);
CMat sm_matrix(cplx s1, cplx s2);
CMat golden_matrix(std::span<const cplx> s);   // 4 symbols
CMat three_d_matrix(std::span<const cplx> s);  // 8 symbols

// Scale that brings total radiated power per channel use to 1, i.e.
// E[|X|_F^2] = n_time. Equals 1/sqrt(n_tx) for all four schemes.
double power_scale(SchemeId id);

// Power-normalised codeword. Throws std::invalid_argument on a symbol
// count that does not match the scheme.
Codeword encode(SchemeId id, std::span<const cplx> syms);

// Real-linear generator expansion: X = sum_k u_k G_k with
// u = (Re s1, Im s1, ..., Re sQ, Im sQ). Needed because the conjugations
// in the codeword matrices are linear over the reals only.
struct DispersionSet {
  std::vector<CMat> gens;  // 2*n_syms generators, each n_tx x n_time
  int n_syms = 0;
};

const DispersionSet& dispersion(SchemeId id);
CMat reconstruct(const DispersionSet& d, std::span<const cplx> syms);

// --- double-layer construction ---------------------------------------
//
// The outer layer maps L symbol sets onto a 2 x U matrix whose entries
// are (coefficient, conjugation, set index) triples; the inner layer
// expands every entry into an M_T x T block. Entry (i,j) of the outer
// matrix therefore becomes coeff * conj^(flag)(inner(set)) as the (i,j)
// block of the (2 M_T) x (U T) result.

struct OuterEntry {
  int set = 0;       // which of the L symbol sets feeds this entry
  cplx coeff = 1.0;  // multiplicative constant (sign / phase)
  bool conjugate = false;
};

struct OuterLayer {
  int n_sets = 0;  // L
  int n_cols = 0;  // U
  std::vector<OuterEntry> entries;  // row-major, 2 x n_cols
};

// Inter-site Alamouti pattern with the conjugated pair on the second
// site: [[c1, c2], [-c2*, c1*]].
OuterLayer alamouti_outer();

struct InnerLayer {
  int n_tx = 0;
  int n_time = 0;
  int n_syms = 0;
  std::function<CMat(std::span<const cplx>)> encode;
};

InnerLayer golden_inner();
InnerLayer identity_inner();  // M_T = 1, passes the symbol through

class LayeredEncoder {
 public:
  LayeredEncoder(OuterLayer outer, InnerLayer inner);

  CMat operator()(std::span<const cplx> syms) const;

  int n_tx() const { return 2 * inner_.n_tx; }
  int n_time() const { return outer_.n_cols * inner_.n_time; }
  int n_syms() const { return outer_.n_sets * inner_.n_syms; }
  Rational rate() const;

 private:
  OuterLayer outer_;
  InnerLayer inner_;
};

// Validates layer compatibility; throws std::invalid_argument.
LayeredEncoder build_double_layer(OuterLayer outer, InnerLayer inner);

}  // namespace stsbc
