#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "proxpep/experiment.hpp"

using namespace proxpep;

namespace {

ExperimentConfig load_config(const std::string& path, const CliOverrides& o) {
  json j;
  try {
    j = read_json_file(path);
  } catch (const json::parse_error& e) {
    throw UsageError("cannot parse config " + path + ": " + e.what());
  } catch (const std::runtime_error& e) {
    throw UsageError(e.what());
  }
  return parse_config(j, o);
}

// six-algorithm table on a seeded 10-dim lasso at N = 20
ExperimentConfig default_compare_config(const CliOverrides& o) {
  json j = {{"problem", {{"kind", "lasso"}, {"dimension", 10}}},
            {"algorithms", json::array({{{"name", "pgm"}},
                                        {{"name", "fpgm"}},
                                        {{"name", "fpgm_sigma"}, {"sigma", 0.78}},
                                        {{"name", "fpgm_m"}, {"m_rule", "two_thirds"}},
                                        {{"name", "fpgm_opg"}},
                                        {{"name", "fpgm_a"}, {"a", 4}}})},
            {"N", json::array({20})}};
  return parse_config(j, o);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Proximal gradient methods, worst-case bounds and certificates"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<double> tol;
  std::string m_rounding = "floor";
  std::optional<std::string> sigma_constant;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "RNG seed (overrides config)");
    sub->add_option("--out", out_dir, "output directory (overrides config)");
    sub->add_option("--tol", tol, "reference solver tolerance (overrides config)");
    sub->add_option("--m-rounding", m_rounding, "OPG split point rounding")
        ->check(CLI::IsMember({"floor", "ceil"}));
    sub->add_option("--sigma-constant", sigma_constant, "FPGM-sigma prox constant")
        ->check(CLI::IsMember({"L_over_sigma", "sigma_L"}));
  };

  auto* run = app.add_subcommand("run", "run algorithms and write trace CSVs");
  run->add_option("--config", config_path, "experiment config JSON")->required();
  add_common(run);

  auto* compare = app.add_subcommand("compare", "markdown table of bounds against observed values");
  compare->add_option("--config", config_path, "experiment config JSON (default: six-algorithm table)");
  add_common(compare);

  std::string t_spec = "fista";
  std::size_t N = 10;
  double L = 1.0;
  double R = 1.0;
  auto* certify = app.add_subcommand("certify", "build and check the dual certificates for a t-sequence");
  certify->add_option("--t", t_spec, "fista | opg | linear:A | custom:v0,v1,...");
  certify->add_option("--N", N, "horizon");
  certify->add_option("--L", L, "Lipschitz constant for the bound values");
  certify->add_option("--R", R, "initial distance for the bound values");
  add_common(certify);

  std::size_t quad_N = 6;
  std::size_t restarts = 20;
  auto* quadopt = app.add_subcommand("quadopt", "maximize the constrained quadratic over t-sequences");
  quadopt->add_option("--N", quad_N, "horizon");
  quadopt->add_option("--restarts", restarts, "random restarts");
  add_common(quadopt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    CliOverrides o;
    o.seed = seed;
    if (out_dir) o.out = *out_dir;
    o.tolerance = tol;
    o.rounding = parse_rounding(m_rounding);
    if (sigma_constant) o.sigma_constant = parse_sigma_constant(*sigma_constant);

    if (*run) {
      cmd_run(load_config(config_path, o), std::cerr);
      return 0;
    }
    if (*compare) {
      const ExperimentConfig c = config_path.empty() ? default_compare_config(o) : load_config(config_path, o);
      const CompareResult res = cmd_compare(c);
      std::cout << res.markdown;
      if (out_dir || !config_path.empty()) write_file_atomic(c.out / "compare.md", res.markdown);
      if (res.violations > 0) {
        std::cerr << "error: " << res.violations << " bound violation(s)\n";
        return 1;
      }
      return 0;
    }
    if (*certify) {
      const CertifyResult res = cmd_certify(parse_t_spec(t_spec, *o.rounding), N, L, R);
      std::cout << res.report.dump(2) << '\n';
      if (!res.valid) {
        std::cerr << "error: invalid t-sequence\n";
        for (const auto& v : res.report["validation"]["violations"]) {
          std::cerr << "  index " << v["index"] << ": " << v["kind"].get<std::string>() << '\n';
        }
        return 1;
      }
      return 0;
    }
    if (*quadopt) {
      QuadOptions qo;
      qo.restarts = restarts;
      if (seed) qo.seed = *seed;
      std::cout << cmd_quadopt(quad_N, *o.rounding, qo).dump(2) << '\n';
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
