#include "stsbc/stbc.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace stsbc {

namespace {
constexpr cplx kJ{0.0, 1.0};

void require_count(std::span<const cplx> s, size_t n, const char* what) {
  if (s.size() != n) {
    throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(n) +
                                " symbols, got " + std::to_string(s.size()));
  }
}
}  // namespace

SchemeDims scheme_dims(SchemeId id) {
  switch (id) {
    case SchemeId::Alamouti:
      return {2, 2, 2};
    case SchemeId::SpatialMux:
      return {2, 1, 2};
    case SchemeId::Golden:
      return {2, 2, 4};
    case SchemeId::ThreeD:
      return {4, 4, 8};
  }
  throw std::invalid_argument("unknown scheme");
}

const char* scheme_name(SchemeId id) {
  switch (id) {
    case SchemeId::Alamouti:
      return "alamouti";
    case SchemeId::SpatialMux:
      return "sm";
    case SchemeId::Golden:
      return "golden";
    case SchemeId::ThreeD:
      return "3d";
  }
  return "?";
}

SchemeId scheme_from_name(std::string_view name) {
  if (name == "alamouti") return SchemeId::Alamouti;
  if (name == "sm") return SchemeId::SpatialMux;
  if (name == "golden") return SchemeId::Golden;
  if (name == "3d") return SchemeId::ThreeD;
  throw std::invalid_argument("unknown scheme name: " + std::string(name));
}

Rational code_rate(SchemeId id) {
  switch (id) {
    case SchemeId::Alamouti:
      return {1, 1};  // 2 symbols / 2 slots
    case SchemeId::SpatialMux:
      return {2, 1};  // 2 symbols / 1 slot
    case SchemeId::Golden:
      return {2, 1};  // 4 symbols / 2 slots
    case SchemeId::ThreeD:
      return {2, 1};  // 8 symbols / 4 slots
  }
  throw std::invalid_argument("unknown scheme");
}

const CodeConstants& golden_constants() {
  static const CodeConstants c = [] {
    CodeConstants k;
    k.theta = (1.0 + std::sqrt(5.0)) / 2.0;
    k.theta_bar = 1.0 - k.theta;
    k.alpha = cplx{1.0, 1.0 - k.theta};
    k.alpha_bar = cplx{1.0, 1.0 - k.theta_bar};
    k.mu = kJ;
    k.scale = 1.0 / std::sqrt(5.0);
    return k;
  }();
  return c;
}

CMat alamouti_matrix(cplx s1, cplx s2) {
  CMat x(2, 2);
  x << s1, -std::conj(s2),  //
      s2, std::conj(s1);
  return x;
}

CMat sm_matrix(cplx s1, cplx s2) {
  CMat x(2, 1);
  x << s1, s2;
  return x;
}

CMat golden_matrix(std::span<const cplx> s) {
  require_count(s, 4, "golden_matrix");
  const auto& k = golden_constants();
  CMat x(2, 2);
  x(0, 0) = k.alpha * (s[0] + k.theta * s[1]);
  x(0, 1) = k.alpha * (s[2] + k.theta * s[3]);
  x(1, 0) = k.mu * k.alpha_bar * (s[2] + k.theta_bar * s[3]);
  x(1, 1) = k.alpha_bar * (s[0] + k.theta_bar * s[1]);
  return k.scale * x;
}

CMat three_d_matrix(std::span<const cplx> s) {
  require_count(s, 8, "three_d_matrix");
  // Inter-site Alamouti over two intra-site Golden blocks:
  // rows 0-1 are the site-1 antennas, rows 2-3 site 2.
  const CMat a = golden_matrix(s.subspan(0, 4));
  const CMat b = golden_matrix(s.subspan(4, 4));
  CMat x(4, 4);
  x.block(0, 0, 2, 2) = a;
  x.block(0, 2, 2, 2) = b;
  x.block(2, 0, 2, 2) = -b.conjugate();
  x.block(2, 2, 2, 2) = a.conjugate();
  return x;
}

double power_scale(SchemeId id) { return 1.0 / std::sqrt(static_cast<double>(scheme_dims(id).n_tx)); }

Codeword encode(SchemeId id, std::span<const cplx> syms) {
  const auto dims = scheme_dims(id);
  require_count(syms, static_cast<size_t>(dims.n_syms), "encode");
  CMat x;
  switch (id) {
    case SchemeId::Alamouti:
      x = alamouti_matrix(syms[0], syms[1]);
      break;
    case SchemeId::SpatialMux:
      x = sm_matrix(syms[0], syms[1]);
      break;
    case SchemeId::Golden:
      x = golden_matrix(syms);
      break;
    case SchemeId::ThreeD:
      x = three_d_matrix(syms);
      break;
  }
  return {power_scale(id) * x, id};
}

const DispersionSet& dispersion(SchemeId id) {
  static const auto make = [](SchemeId sid) {
    const auto dims = scheme_dims(sid);
    DispersionSet d;
    d.n_syms = dims.n_syms;
    d.gens.reserve(2 * dims.n_syms);
    std::vector<cplx> basis(dims.n_syms, cplx{0.0, 0.0});
    for (int q = 0; q < dims.n_syms; ++q) {
      basis[q] = cplx{1.0, 0.0};
      d.gens.push_back(encode(sid, basis).entries);
      basis[q] = cplx{0.0, 1.0};
      d.gens.push_back(encode(sid, basis).entries);
      basis[q] = cplx{0.0, 0.0};
    }
    return d;
  };
  switch (id) {
    case SchemeId::Alamouti: {
      static const DispersionSet d = make(SchemeId::Alamouti);
      return d;
    }
    case SchemeId::SpatialMux: {
      static const DispersionSet d = make(SchemeId::SpatialMux);
      return d;
    }
    case SchemeId::Golden: {
      static const DispersionSet d = make(SchemeId::Golden);
      return d;
    }
    case SchemeId::ThreeD: {
      static const DispersionSet d = make(SchemeId::ThreeD);
      return d;
    }
  }
  throw std::invalid_argument("unknown scheme");
}

CMat reconstruct(const DispersionSet& d, std::span<const cplx> syms) {
  if (static_cast<int>(syms.size()) != d.n_syms) {
    throw std::invalid_argument("reconstruct: symbol count mismatch");
  }
  CMat x = CMat::Zero(d.gens[0].rows(), d.gens[0].cols());
  for (int q = 0; q < d.n_syms; ++q) {
    x += syms[q].real() * d.gens[2 * q];
    x += syms[q].imag() * d.gens[2 * q + 1];
  }
  return x;
}

OuterLayer alamouti_outer() {
  OuterLayer o;
  o.n_sets = 2;
  o.n_cols = 2;
  o.entries = {
      {0, cplx{1.0, 0.0}, false}, {1, cplx{1.0, 0.0}, false},   // site 1
      {1, cplx{-1.0, 0.0}, true}, {0, cplx{1.0, 0.0}, true},    // site 2
  };
  return o;
}

InnerLayer golden_inner() {
  InnerLayer in;
  in.n_tx = 2;
  in.n_time = 2;
  in.n_syms = 4;
  in.encode = [](std::span<const cplx> s) { return golden_matrix(s); };
  return in;
}

InnerLayer identity_inner() {
  InnerLayer in;
  in.n_tx = 1;
  in.n_time = 1;
  in.n_syms = 1;
  in.encode = [](std::span<const cplx> s) {
    CMat x(1, 1);
    x(0, 0) = s[0];
    return x;
  };
  return in;
}

LayeredEncoder::LayeredEncoder(OuterLayer outer, InnerLayer inner)
    : outer_(std::move(outer)), inner_(std::move(inner)) {
  if (outer_.n_sets < 1 || outer_.n_cols < 1 ||
      outer_.entries.size() != static_cast<size_t>(2 * outer_.n_cols)) {
    throw std::invalid_argument("outer layer must be a 2 x U entry grid");
  }
  if (inner_.n_tx < 1 || inner_.n_time < 1 || inner_.n_syms < 1 || !inner_.encode) {
    throw std::invalid_argument("inner layer has invalid dimensions");
  }
  for (const auto& e : outer_.entries) {
    if (e.set < 0 || e.set >= outer_.n_sets) {
      throw std::invalid_argument("outer entry references a symbol set out of range");
    }
  }
}

CMat LayeredEncoder::operator()(std::span<const cplx> syms) const {
  if (static_cast<int>(syms.size()) != n_syms()) {
    throw std::invalid_argument("double layer encode: symbol count mismatch");
  }
  const int mt = inner_.n_tx;
  const int t = inner_.n_time;
  CMat x = CMat::Zero(n_tx(), n_time());
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < outer_.n_cols; ++j) {
      const auto& e = outer_.entries[i * outer_.n_cols + j];
      auto set = syms.subspan(static_cast<size_t>(e.set) * inner_.n_syms, inner_.n_syms);
      CMat block = inner_.encode(set);
      if (block.rows() != mt || block.cols() != t) {
        throw std::invalid_argument("inner encoder block has wrong shape");
      }
      if (e.conjugate) block = block.conjugate();
      x.block(i * mt, j * t, mt, t) = e.coeff * block;
    }
  }
  return x;
}

Rational LayeredEncoder::rate() const {
  long num = static_cast<long>(inner_.n_syms) * outer_.n_sets;
  long den = static_cast<long>(outer_.n_cols) * inner_.n_time;
  return {num, den};
}

LayeredEncoder build_double_layer(OuterLayer outer, InnerLayer inner) {
  return LayeredEncoder(std::move(outer), std::move(inner));
}

}  // namespace stsbc
