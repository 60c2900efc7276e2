#pragma once

#include <string>

#include "crn/network.hpp"
#include "crn/params_io.hpp"
#include "oracles.hpp"

namespace testing_support {

inline std::string fixture(const std::string& name) { return std::string(CRN_FIXTURE_DIR) + "/" + name; }

inline crn::Network load(const std::string& name) { return crn::load_network(fixture(name)); }

inline crn::ParamSet params(const crn::Network& net, const std::string& name) {
  return crn::load_params(fixture(name), net);
}

inline std::size_t idx(const crn::Network& net, const std::string& species) { return net.species_index(species).value(); }

inline oracle::Mat to_oracle(const crn::RationalMatrix& m) {
  oracle::Mat out(m.rows(), oracle::Vec(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out[r][c] = m(r, c);
  return out;
}

}  // namespace testing_support
