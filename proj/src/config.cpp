// Copyright 2026 The seplab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <fstream>

#include "seplab/harness.hpp"

namespace seplab {

namespace {

Matrix MatrixFromRows(const Json& rows) {
  if (!rows.is_array() || rows.empty())
    throw ConfigError("matrix must be a nonempty array of rows");
  const std::size_t cols = rows.front().size();
  Matrix m(static_cast<Eigen::Index>(rows.size()),
           static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].is_array() || rows[i].size() != cols)
      throw ConfigError("matrix rows must have equal length");
    for (std::size_t j = 0; j < cols; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j].get<double>();
  }
  return m;
}

Vector VectorFromJson(const Json& arr) {
  const auto values = arr.get<std::vector<double>>();
  return Eigen::Map<const Vector>(values.data(),
                                  static_cast<Eigen::Index>(values.size()));
}

// Square n x n basis by name, or an explicit matrix.
Matrix SquareBasis(const Json& spec, std::size_t n) {
  if (spec.is_string()) {
    const auto name = spec.get<std::string>();
    if (name == "identity")
      return Matrix::Identity(static_cast<Eigen::Index>(n),
                              static_cast<Eigen::Index>(n));
    if (name == "dct_orthonormal") return DctBasis(n);
    if (name == "hadamard_scaled") return HadamardBasis(n);
    throw ConfigError("unknown basis '" + name + "'");
  }
  return MatrixFromRows(spec);
}

template <class F>
auto Guard(F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("bad configuration: ") + e.what());
  }
}

SourceMode ParseMode(const std::string& name) {
  if (name == "exact_sparsity") return SourceMode::kExactSparsity;
  if (name == "mixture") return SourceMode::kMixture;
  if (name == "declip") return SourceMode::kDeclip;
  throw ConfigError("unknown source mode '" + name + "'");
}

}  // namespace

void to_json(Json& j, const ContinuousLaw& law) {
  if (const auto* u = std::get_if<UniformLaw>(&law)) {
    j = Json{{"type", "uniform"}, {"lo", u->lo}, {"hi", u->hi}};
  } else {
    const auto& g = std::get<GaussianLaw>(law);
    j = Json{{"type", "gaussian"}, {"mean", g.mean}, {"sd", g.sd}};
  }
}

void from_json(const Json& j, ContinuousLaw& law) {
  const auto type = j.at("type").get<std::string>();
  if (type == "uniform") {
    law = UniformLaw{j.value("lo", -1.0), j.value("hi", 1.0)};
  } else if (type == "gaussian") {
    law = GaussianLaw{j.value("mean", 0.0), j.value("sd", 1.0)};
  } else {
    throw ConfigError("unknown continuous law '" + type + "'");
  }
}

void to_json(Json& j, const MixtureSpec& spec) {
  Json atoms = Json::array();
  for (const Atom& a : spec.atoms)
    atoms.push_back(Json{{"value", a.value}, {"weight", a.weight}});
  j = Json{{"rho", spec.rho}, {"atoms", atoms}, {"law", spec.law}};
}

void from_json(const Json& j, MixtureSpec& spec) {
  spec.rho = j.at("rho").get<double>();
  if (j.contains("atoms")) {
    spec.atoms.clear();
    for (const Json& a : j.at("atoms")) {
      if (a.is_array()) {
        spec.atoms.push_back({a.at(0).get<double>(), a.at(1).get<double>()});
      } else {
        spec.atoms.push_back(
            {a.at("value").get<double>(), a.at("weight").get<double>()});
      }
    }
  }
  if (j.contains("law")) spec.law = j.at("law").get<ContinuousLaw>();
}

void to_json(Json& j, const ConcatSpec& spec) {
  j = Json{{"y", spec.spec_y}, {"z", spec.spec_z}, {"lambda", spec.lambda}};
}

void from_json(const Json& j, ConcatSpec& spec) {
  spec.spec_y = j.at("y").get<MixtureSpec>();
  spec.spec_z = j.contains("z") ? j.at("z").get<MixtureSpec>() : spec.spec_y;
  spec.lambda = j.value("lambda", 0.0);
}

void ExperimentConfig::Validate() const {
  if (n == 0) throw ConfigError("n must be positive");
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw ConfigError("lambda must lie in [0, 1]");
  if (trials == 0) throw ConfigError("trials must be >= 1");
  if (!(kappa >= 0.0 && kappa <= 0.1))
    throw ConfigError("kappa must lie in [0, 0.1]");
  const std::size_t split = Split();
  for (std::size_t k : k_values) {
    if (k == 0 || k < split)
      throw ConfigError("every k must satisfy k >= max(1, floor(lambda n))");
  }
  if (epsilon && !(*epsilon > 0.0 && *epsilon < 1.0))
    throw ConfigError("epsilon must lie in (0, 1)");
  a_law.Validate();
  switch (mode) {
    case SourceMode::kExactSparsity:
      if (!support) throw ConfigError("exact_sparsity needs s1 and s2");
      if (support->s1 > n - split || support->s2 > split)
        throw ConfigError("support model exceeds the block lengths");
      seplab::Validate(value_law);
      break;
    case SourceMode::kMixture:
      if (!support && !epsilon)
        throw ConfigError("mixture mode needs s1/s2 or epsilon");
      concat.Validate();
      break;
    case SourceMode::kDeclip:
      if (std::abs(lambda - 0.5) > 1e-12)
        throw ConfigError("declipping requires lambda = 1/2");
      declip.Validate();
      if (static_cast<std::size_t>(declip.dictionary.rows()) != split ||
          static_cast<std::size_t>(declip.dictionary.cols()) != n - split)
        throw ConfigError("dictionary must be floor(n/2) x (n - floor(n/2))");
      break;
  }
  if (k_values.empty() && mode != SourceMode::kDeclip)
    throw ConfigError("k_values must be nonempty");
}

ExperimentConfig ParseExperimentConfig(const Json& j) {
  return Guard([&] {
    ExperimentConfig c;
    c.n = j.at("n").get<std::size_t>();
    c.lambda = j.value("lambda", 0.0);
    const Json& src = j.at("source");
    c.mode = ParseMode(src.value("mode", std::string("exact_sparsity")));
    switch (c.mode) {
      case SourceMode::kExactSparsity:
        if (src.contains("law")) c.value_law = src.at("law").get<ContinuousLaw>();
        break;
      case SourceMode::kMixture:
        c.concat.spec_y = src.at("y").get<MixtureSpec>();
        c.concat.spec_z =
            src.contains("z") ? src.at("z").get<MixtureSpec>() : c.concat.spec_y;
        c.concat.lambda = c.lambda;
        break;
      case SourceMode::kDeclip: {
        const std::size_t split = c.Split();
        const Json& dict = src.value("dictionary", Json("dct_orthonormal"));
        if (dict.is_string()) {
          if (c.n - split != split)
            throw ConfigError("named dictionaries need an even n");
          c.declip.dictionary = SquareBasis(dict, split);
        } else {
          c.declip.dictionary = MatrixFromRows(dict);
        }
        c.declip.amplitude = src.at("amplitude").get<double>();
        if (src.contains("coeff"))
          c.declip.coeff_model = src.at("coeff").get<MixtureSpec>();
        if (src.contains("coeff_sparsity"))
          c.declip.coeff_sparsity = src.at("coeff_sparsity").get<std::size_t>();
        c.b_kind = BKind::kIdentityEmbed;
        break;
      }
    }
    if (j.contains("support_model")) {
      const Json& sm = j.at("support_model");
      if (sm.contains("s1") || sm.contains("s2"))
        c.support = SupportModel{sm.value("s1", std::size_t{0}),
                                 sm.value("s2", std::size_t{0})};
      if (sm.contains("epsilon")) c.epsilon = sm.at("epsilon").get<double>();
    }
    if (j.contains("epsilon")) c.epsilon = j.at("epsilon").get<double>();
    if (j.contains("b_kind")) c.b_kind = ParseBKind(j.at("b_kind").get<std::string>());
    if (c.b_kind == BKind::kCustom) c.custom_b = MatrixFromRows(j.at("b_matrix"));
    if (j.contains("a_law")) {
      const Json& a = j.at("a_law");
      c.a_law.law = ParseALaw(a.value("type", std::string("uniform_ball")));
      c.a_law.scale = c.a_law.law == ALaw::kUniformBall ? a.value("r", 1.0)
                                                        : a.value("sd", 1.0);
    }
    c.k_values = j.value("k_values", std::vector<std::size_t>{});
    c.trials = j.value("trials", c.trials);
    c.seed = j.value("seed", c.seed);
    if (j.contains("tolerances")) {
      const Json& t = j.at("tolerances");
      c.tolerances.fit = t.value("fit", c.tolerances.fit);
      c.tolerances.distinct = t.value("distinct", c.tolerances.distinct);
      c.tolerances.rank = t.value("rank", c.tolerances.rank);
    }
    c.kappa = j.value("kappa", 0.0);
    c.budget = j.value("budget", c.budget);
    c.threads = j.value("threads", c.threads);
    c.output = j.value("output", std::string());
    c.format = j.value("format", c.format);
    for (const Json& chk : j.value("checks", Json::array())) {
      CurveCheck cc;
      cc.k = chk.at("k").get<std::size_t>();
      if (chk.contains("min_success_rate"))
        cc.min_success_rate = chk.at("min_success_rate").get<double>();
      if (chk.contains("max_success_rate"))
        cc.max_success_rate = chk.at("max_success_rate").get<double>();
      if (chk.contains("min_ambiguous_rate"))
        cc.min_ambiguous_rate = chk.at("min_ambiguous_rate").get<double>();
      c.checks.push_back(cc);
    }
    if (j.contains("max_isotonic_violation"))
      c.max_isotonic_violation = j.at("max_isotonic_violation").get<double>();
    c.pilot_samples = j.value("pilot_samples", c.pilot_samples);
    c.cloud_samples = j.value("cloud_samples", c.cloud_samples);
    c.j_min = j.value("j_min", c.j_min);
    c.j_max = j.value("j_max", c.j_max);
    c.Validate();
    return c;
  });
}

ConcentrationConfig ParseConcentrationConfig(const Json& j) {
  return Guard([&] {
    ConcentrationConfig c;
    c.n = j.value("n", c.n);
    c.k = j.value("k", c.k);
    c.r = j.value("r", c.r);
    if (c.n == 0 || c.k == 0) throw ConfigError("n and k must be positive");
    if (!(c.r > 0.0)) throw ConfigError("r must be positive");
    c.u = j.contains("u") ? VectorFromJson(j.at("u"))
                          : Vector::Unit(static_cast<Eigen::Index>(c.n), 0);
    c.v = j.contains("v") ? VectorFromJson(j.at("v"))
                          : Vector::Zero(static_cast<Eigen::Index>(c.k));
    c.deltas = j.value("deltas", c.deltas);
    c.trials = j.value("trials", c.trials);
    c.seed = j.value("seed", c.seed);
    if (j.contains("slope_tol")) c.slope_tol = j.at("slope_tol").get<double>();
    return c;
  });
}

DimensionConfig ParseDimensionConfig(const Json& j) {
  return Guard([&] {
    DimensionConfig c;
    c.cloud = j.at("cloud");
    c.j_min = j.value("j_min", c.j_min);
    c.j_max = j.value("j_max", c.j_max);
    c.seed = j.value("seed", c.seed);
    if (j.contains("expect")) {
      c.expect_slope = j.at("expect").at("slope").get<double>();
      c.expect_tol = j.at("expect").value("tol", c.expect_tol);
    }
    if (j.contains("cover")) {
      const Json& q = j.at("cover");
      CoverQuery query;
      query.delta = q.at("delta").get<double>();
      const auto mode = q.value("center_mode", std::string("in_set"));
      if (mode != "in_set" && mode != "free")
        throw ConfigError("center_mode must be in_set or free");
      query.center_mode = mode == "free" ? CenterMode::kFree : CenterMode::kInSet;
      const auto solver = q.value("solver", std::string("greedy"));
      if (solver != "exact" && solver != "greedy")
        throw ConfigError("solver must be exact or greedy");
      query.solver =
          solver == "exact" ? CoverSolver::kExact : CoverSolver::kGreedy;
      c.cover = query;
    }
    return c;
  });
}

PointCloud BuildCloud(const Json& spec, std::uint64_t seed) {
  return Guard([&] {
    const auto type = spec.at("type").get<std::string>();
    if (type == "file") return ReadCloudText(spec.at("path").get<std::string>());
    if (type == "segment")
      return SegmentCloud(spec.value("points", std::size_t{513}),
                          spec.value("dim", std::size_t{2}));
    if (type == "cantor") return CantorCloud(spec.value("depth", 8));
    if (type == "union_sparse")
      return UnionSparseCloud(spec.at("n").get<std::size_t>(),
                              spec.at("s").get<std::size_t>(),
                              spec.value("samples", std::size_t{1000}),
                              spec.value("radius", 1.0),
                              spec.value("seed", seed));
    throw ConfigError("unknown cloud type '" + type + "'");
  });
}

UncertaintyConfig ParseUncertaintyConfig(const Json& j) {
  return Guard([&] {
    UncertaintyConfig c;
    c.n = j.value("n", c.n);
    c.principle =
        ParsePrinciple(j.value("principle", std::string("donoho_stark")));
    c.a = SquareBasis(j.value("a", Json("identity")), c.n);
    c.b = SquareBasis(j.value("b", Json("hadamard_scaled")), c.n);
    c.budget = j.value("budget", c.budget);
    c.seed = j.value("seed", c.seed);
    c.expect_holds = j.value("expect_holds", true);
    return c;
  });
}

}  // namespace seplab
