#include <catch_amalgamated.hpp>

#include <clspace/config.hpp>

using namespace clspace;

namespace {

const std::string kDir = CLSPACE_CONFIG_DIR;

}  // namespace

TEST_CASE("shipped configs load") {
  const auto basic = load_config(kDir + "/basic.json");
  CHECK(basic.seed == 7);
  CHECK(basic.young_function("F4")(2.0).value() == 4.0);
  CHECK(basic.function("ones2").sup() == 1.0);
  CHECK(basic.space("lor2").describe().find("Lorentz") != std::string::npos);
  const auto triples = load_config(kDir + "/triples.json");
  CHECK(triples.triples.size() == 4);
  CHECK(triples.verify.probes == 24);
  CHECK(triples.triple("mismatched").conjugate_override.has_value());
}

TEST_CASE("strict parsing rejects unknown keys") {
  CHECK_THROWS_AS(load_config(kDir + "/invalid_key.json"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"sede": 1})", "."), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"young": {"F": {"kind": "power", "p": 2, "q": 3}}})", "."), ConfigError);
  CHECK_THROWS_AS(parse_config("{not json", "."), ConfigError);
}

TEST_CASE("references resolve or fail with the missing name") {
  const auto cfg = parse_config(R"({
    "young": {"A": {"kind": "conjugate", "outer": "B", "inner": {"kind": "power", "p": 4}},
              "B": {"kind": "power", "p": 2}},
    "spaces": {"X": {"kind": "cl", "base": "Y", "young": "A"}, "Y": {"kind": "lp", "p": 1}}
  })", ".");
  CHECK(cfg.young_function("A")(2.0).value() == Catch::Approx(4.0));
  try {
    (void)cfg.young_function("missing");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("missing") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config(R"({"young": {"A": {"kind": "classical_conjugate", "of": "B"},
                                             "B": {"kind": "classical_conjugate", "of": "A"}}})", "."),
                  ConfigError);
}

TEST_CASE("tolerances and optimizer settings") {
  const auto cfg = parse_config(R"({
    "seed": 42,
    "tolerances": {"rtol_norm": 1e-8, "c_max": 4, "split_c": 3},
    "optimizer": {"restarts": 2, "method": "grid_oracle", "zoom_rounds": 5},
    "asymptotics": {"t_max": 1e4, "points": 32}
  })", ".");
  CHECK(cfg.seed == 42);
  CHECK(cfg.verify.c_max == 4.0);
  CHECK(cfg.verify.split_c == 3.0);
  CHECK(cfg.verify.opt.restarts == 2);
  CHECK(cfg.verify.opt.method == OptimizerMethod::grid_oracle);
  CHECK(cfg.verify.opt.norm.rtol_norm == 1e-8);
  CHECK(cfg.verify.grid.t_max == 1e4);
  CHECK(cfg.verify.grid.probes == 32);
  CHECK_THROWS_AS(parse_config(R"({"optimizer": {"method": "annealing"}})", "."), ConfigError);
}

TEST_CASE("functions and triples") {
  const auto cfg = parse_config(R"({
    "models": {"c3": {"kind": "counting", "cells": 3}},
    "young": {"F": {"kind": "power", "p": 2}},
    "spaces": {"L": {"kind": "lorentz", "weight": [1, 0.5, 0.25]}},
    "functions": {"f": {"model": "c3", "values": [2, 1, 1]}, "i": {"model": "c3", "indicator": 2}},
    "triples": {"t": {"space": "L", "model": "c3", "F": "F", "G": {"kind": "truncated_power", "p": 3, "b": 2}}}
  })", ".");
  CHECK(cfg.function("i").values()[1] == 1.0);
  CHECK(cfg.function("i").values()[2] == 0.0);
  CHECK(cfg.triple("t").triple.G.jumps());
  CHECK_THROWS_AS(parse_config(R"({"models": {"c3": {"kind": "counting", "cells": 3}},
                                   "functions": {"f": {"model": "c3", "values": [1, 2]}}})", "."),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"models": {"c3": {"kind": "counting", "cells": 3}},
                                   "spaces": {"L": {"kind": "lorentz", "weight": [1, 0.5]}},
                                   "young": {"F": {"kind": "power", "p": 2}},
                                   "triples": {"t": {"space": "L", "model": "c3", "F": "F", "G": "F"}}})", "."),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"models": {"c": {"kind": "counting", "cells": 3}},
                                   "functions": {"f": {"model": "c", "values": [1, 2, 3], "indicator": 1}}})", "."),
                  ConfigError);
}

TEST_CASE("grid resolution zero selects the automatic choice") {
  CHECK(parse_config(R"({"optimizer": {"resolution": 0}})", ".").verify.opt.resolution == 0);
  CHECK_THROWS_AS(parse_config(R"({"optimizer": {"resolution": -1}})", "."), ConfigError);
}
