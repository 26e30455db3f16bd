#pragma once

#include <fstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

#include "momentlab/fixtures.hpp"
#include "momentlab/momentlab.hpp"

namespace momentlab::test {

inline const nlohmann::json& fixtures() {
  static const nlohmann::json j = [] {
    std::ifstream in(MOMENTLAB_FIXTURE_FILE);
    if (!in) throw std::runtime_error(std::string("missing fixture file ") + MOMENTLAB_FIXTURE_FILE);
    return nlohmann::json::parse(in);
  }();
  return j;
}

inline cplx fixture_complex(const nlohmann::json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

struct Group {
  explicit Group(std::int64_t q) : ctx(build_context(q)), g(ctx) {}
  ContextPtr ctx;
  CharacterGroup g;
};

}  // namespace momentlab::test
