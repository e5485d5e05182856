// tmm: command-line front end. Exit 0 on success, 2 on bad input, 3 when a
// numerical method (or an acceptance criterion) fails.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "tmm/acceptance.hpp"
#include "tmm/biorthogonal.hpp"
#include "tmm/equilibrium.hpp"
#include "tmm/errors.hpp"
#include "tmm/phase.hpp"
#include "tmm/rh.hpp"
#include "tmm/sampler.hpp"

#ifndef TMM_VERSION
#define TMM_VERSION "unknown"
#endif

using nlohmann::json;
using namespace tmm;

namespace {

struct Common {
  bool json_out = false;
  std::string out;       // data file
  std::string manifest;  // manifest file
};

// Every run records the resolved configuration: into the JSON envelope, and
// into a manifest file next to --out (or at --manifest).
void emit(const Common& c, const std::string& command, const json& config, const json& result, const std::string& text) {
  const json manifest = {{"command", command}, {"config", config}, {"version", TMM_VERSION}};
  std::string mpath = c.manifest;
  if (mpath.empty() && !c.out.empty()) mpath = c.out + ".manifest.json";
  if (!mpath.empty()) {
    std::ofstream f(mpath);
    if (!f) throw ValidationError("--manifest: cannot write " + mpath);
    f << manifest.dump(2) << "\n";
  }
  if (c.json_out)
    std::cout << json{{"manifest", manifest}, {"result", result}}.dump(2) << "\n";
  else
    std::cout << text;
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream f(path);
  if (!f) throw ValidationError("--out: cannot write " + path);
  f << body;
}

std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Polynomial parse_poly(const std::string& s, const char* flag) {
  std::vector<double> c;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      c.push_back(std::stod(item));
    } catch (...) {
      throw ValidationError(std::string(flag) + ": bad coefficient '" + item + "'");
    }
  }
  return Polynomial(c);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-matrix model laboratory"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* s) {
    s->add_flag("--json", common.json_out, "machine-readable output on stdout");
    s->add_option("--out", common.out, "data file");
    s->add_option("--manifest", common.manifest, "manifest file (default: <out>.manifest.json)");
  };

  // phase
  double alpha = 0.0, tau = 1.0, tol = 1e-9;
  auto* phase = app.add_subcommand("phase", "classify a point of the (alpha, tau) plane");
  phase->add_option("--alpha", alpha)->required();
  phase->add_option("--tau", tau)->required();
  phase->add_option("--tol", tol, "boundary tolerance")->capture_default_str();
  add_common(phase);

  // equilibrium
  std::string potential = "0,0,0.5";
  double left = -6.0, right = 6.0, half = 128.0;
  int cells = 400, iters = 20000;
  double qp_tol = 1e-6;
  bool vector = false, wide = false;
  auto* equilibrium = app.add_subcommand("equilibrium", "one-matrix or vector equilibrium");
  equilibrium->add_option("--potential", potential, "ascending coefficients of V")->capture_default_str();
  equilibrium->add_option("--left", left)->capture_default_str();
  equilibrium->add_option("--right", right)->capture_default_str();
  equilibrium->add_option("--cells", cells)->capture_default_str();
  equilibrium->add_flag("--vector", vector, "three-measure problem for V = x^2/2, W quartic");
  equilibrium->add_option("--alpha", alpha)->capture_default_str();
  equilibrium->add_option("--tau", tau)->capture_default_str();
  equilibrium->add_flag("--wide", wide, "wide grids for mu2, mu3");
  equilibrium->add_option("--half-width", half, "mu2, mu3 half-width with --wide")->capture_default_str();
  equilibrium->add_option("--iters", iters)->capture_default_str();
  equilibrium->add_option("--tol", qp_tol)->capture_default_str();
  add_common(equilibrium);

  // sample
  int n = 99, count = 200, jobs = 0, chains = 4;
  std::uint64_t seed = 1;
  auto* sample = app.add_subcommand("sample", "eigenvalues of M1 by Monte Carlo");
  sample->add_option("--alpha", alpha)->capture_default_str();
  sample->add_option("--tau", tau)->capture_default_str();
  sample->add_option("--n", n)->capture_default_str();
  sample->add_option("--count", count)->capture_default_str();
  sample->add_option("--seed", seed)->capture_default_str();
  sample->add_option("--jobs", jobs, "threads, 0 = default")->capture_default_str();
  sample->add_option("--chains", chains)->capture_default_str();
  add_common(sample);

  // biortho
  int size = 12, bits = 256, n_scale = 6;
  std::string kernel = "K11";
  double kx = 0.3, ky = 0.2;
  auto* biortho = app.add_subcommand("biortho", "biorthogonal family and kernels");
  biortho->add_option("--alpha", alpha)->capture_default_str();
  biortho->add_option("--tau", tau)->capture_default_str();
  biortho->add_option("--n", n_scale)->capture_default_str();
  biortho->add_option("--size", size)->capture_default_str();
  biortho->add_option("--bits", bits)->capture_default_str();
  biortho->add_option("--kernel", kernel, "K11, K12, K21 or K22")->capture_default_str();
  biortho->add_option("--x", kx)->capture_default_str();
  biortho->add_option("--y", ky)->capture_default_str();
  add_common(biortho);

  // curve
  std::string example = "3";
  double cx = 0.0, cxi = 0.0, mult_tol = 1e-6;
  bool have_tau = false;
  auto* curve = app.add_subcommand("curve", "spectral curve and root multiplicity");
  curve->add_option("--example", example, "1, 2, 2c or 3")->capture_default_str();
  auto* tau_opt = curve->add_option("--tau", tau, "coupling (default: the example's)");
  auto* x_opt = curve->add_option("--x", cx);
  auto* xi_opt = curve->add_option("--xi", cxi);
  curve->add_option("--tol", mult_tol)->capture_default_str();
  add_common(curve);

  // kernel
  std::string ktype = "sine";
  double kmin = -1.0, kmax = 1.0, param = 0.0;
  int points = 11, nodes = 64;
  auto* kern = app.add_subcommand("kernel", "limiting kernel on a grid, CSV");
  kern->add_option("--type", ktype, "sine, airy, pearcey or pii")->capture_default_str();
  kern->add_option("--min", kmin)->capture_default_str();
  kern->add_option("--max", kmax)->capture_default_str();
  kern->add_option("--points", points)->capture_default_str();
  kern->add_option("--param", param, "s for pearcey, nu for pii")->capture_default_str();
  kern->add_option("--nodes", nodes, "pearcey nodes per ray")->capture_default_str();
  add_common(kern);

  // rhp-check
  std::string problem = "pii";
  double phi1 = 0.4, phi2 = 1.0;
  auto* rhp = app.add_subcommand("rhp-check", "jump cycle residuals");
  rhp->add_option("--problem", problem, "pii or critical")->capture_default_str();
  rhp->add_option("--phi1", phi1)->capture_default_str();
  rhp->add_option("--phi2", phi2)->capture_default_str();
  add_common(rhp);

  // verify
  std::vector<int> only;
  auto* verify = app.add_subcommand("verify", "acceptance suite");
  verify->add_option("--only", only, "criterion ids");
  add_common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*phase) {
      const auto p = classify_phase(alpha, tau, tol);
      emit(common, "phase", {{"alpha", alpha}, {"tau", tau}, {"tol", tol}}, {{"phase", to_string(p.phase)}},
           to_string(p.phase) + "\n");
    } else if (*equilibrium) {
      SolverOptions opt;
      json config = {{"iters", iters}, {"tol", qp_tol}};
      json result;
      std::ostringstream text;
      if (vector) {
        config.update({{"alpha", alpha}, {"tau", tau}, {"wide", wide}, {"half_width", half}});
        const auto grids = wide ? VectorGrids::wide(half) : VectorGrids::defaults();
        const auto s = solve_vector_equilibrium(alpha, tau, gaussian_potential(), grids, iters, qp_tol, opt);
        result = to_json(s);
        text << "endpoints a " << s.endpoints.a << " c1 " << s.endpoints.c1 << " c2 " << s.endpoints.c2 << " c3 "
             << s.endpoints.c3 << "\nresiduals " << s.residuals[0] << " " << s.residuals[1] << " " << s.residuals[2]
             << "\nphase " << to_string(classify_phase(alpha, tau).phase) << "\n";
      } else {
        config.update({{"potential", potential}, {"left", left}, {"right", right}, {"cells", cells}});
        const auto s = solve_one_matrix(parse_poly(potential, "--potential"), GridMeasure::make(left, right, cells),
                                        iters, qp_tol, opt);
        result = to_json(s);
        text << "support";
        for (const auto& iv : s.support_intervals) text << " [" << iv[0] << ", " << iv[1] << "]";
        text << "\nresidual " << s.residual << "\nenergy " << s.energy << "\n";
      }
      if (!common.out.empty()) write_file(common.out, result.dump(2) + "\n");
      emit(common, "equilibrium", config, result, text.str());
    } else if (*sample) {
      ChainParams cp;
      cp.jobs = jobs;
      cp.chains = chains;
      const auto batch = sample_m1_batch(alpha, tau, n, count, seed, cp);
      std::ostringstream csv;
      csv << "seed,n,alpha,tau";
      for (int i = 1; i <= n; ++i) csv << ",lambda_" << i;
      csv << "\n";
      for (const auto& smp : batch) {
        csv << smp.seed << "," << smp.n << "," << csv_number(alpha) << "," << csv_number(tau);
        for (double v : smp.values) csv << "," << csv_number(v);
        csv << "\n";
      }
      if (!common.out.empty()) write_file(common.out, csv.str());
      const json config = {{"alpha", alpha}, {"tau", tau}, {"n", n}, {"count", count},
                           {"seed", seed},   {"chains", chains}};
      emit(common, "sample", config, {{"samples", batch.size()}, {"n", n}},
           common.out.empty() ? csv.str() : "wrote " + common.out + "\n");
    } else if (*biortho) {
      const auto pp = PotentialPair::quartic(alpha, tau);
      const auto f = biorthogonal_family(bimoments(pp, n_scale, size, bits));
      const KernelSet ks(f);
      const double kv = ks(kernel_kind(kernel), kx, ky);
      json result = to_json(f);
      result["kernel"] = {{"kind", kernel}, {"u", kx}, {"v", ky}, {"value", kv}};
      if (!common.out.empty()) write_file(common.out, result.dump(2) + "\n");
      std::ostringstream text;
      text.precision(12);
      text << "h^2:";
      for (double h : f.h_sq) text << " " << h;
      text << "\nresidual " << f.residual << "\n" << kernel << "(" << kx << ", " << ky << ") = " << kv << "\n";
      emit(common, "biortho",
           {{"alpha", alpha}, {"tau", tau}, {"n", n_scale}, {"size", size}, {"bits", bits}, {"kernel", kernel}, {"x", kx}, {"y", ky}},
           result, text.str());
    } else if (*curve) {
      have_tau = tau_opt->count() > 0;
      const auto e = have_tau ? curve_example(example, tau) : curve_example(example);
      const double x0 = x_opt->count() ? cx : e.x0, xi0 = xi_opt->count() ? cxi : e.xi0;
      const auto m = extrapolated_moments(w_effective(e.w, e.tau), e.grid, std::max(2, e.w.degree() - 1));
      const auto c = spectral_curve_from_moments(e.w, e.tau, m);
      const int mult = root_multiplicity(c, x0, xi0, mult_tol);
      json result = to_json(c);
      result["multiplicity"] = mult;
      result["derivatives"] = xi_derivatives(c, x0, xi0, std::max(1, c.at_x(x0).degree() + 1));
      emit(common, "curve", {{"example", example}, {"tau", e.tau}, {"x", x0}, {"xi", xi0}, {"tol", mult_tol}}, result,
           "multiplicity " + std::to_string(mult) + "\n");
    } else if (*kern) {
      if (points < 1) throw ValidationError("--points must be >= 1");
      std::optional<HMSolution> hm;
      if (ktype == "pii") hm = hastings_mcleod();
      else if (ktype != "sine" && ktype != "airy" && ktype != "pearcey")
        throw ValidationError("--type: expected sine, airy, pearcey or pii");
      std::ostringstream csv;
      csv << "x,y,param,value\n";
      for (int i = 0; i < points; ++i)
        for (int j = 0; j < points; ++j) {
          const double x = points == 1 ? kmin : kmin + (kmax - kmin) * i / (points - 1);
          const double y = points == 1 ? kmin : kmin + (kmax - kmin) * j / (points - 1);
          double v = 0.0;
          if (ktype == "sine") v = sine_kernel(x, y);
          else if (ktype == "airy") v = airy_kernel(x, y);
          else if (ktype == "pearcey") v = pearcey_kernel(x, y, param, nodes);
          else v = kpii_kernel(x, y, param, *hm);
          csv << csv_number(x) << "," << csv_number(y) << "," << csv_number(param) << "," << csv_number(v) << "\n";
        }
      if (!common.out.empty()) write_file(common.out, csv.str());
      emit(common, "kernel", {{"type", ktype}, {"min", kmin}, {"max", kmax}, {"points", points}, {"param", param}, {"nodes", nodes}},
           {{"rows", points * points}}, common.out.empty() ? csv.str() : "wrote " + common.out + "\n");
    } else if (*rhp) {
      JumpSystem js;
      if (problem == "pii") js = pii_jumps();
      else if (problem == "critical") js = critical_jumps(phi1, phi2);
      else throw ValidationError("--problem: expected pii or critical");
      const long long r = jump_cycle_check(js);
      emit(common, "rhp-check", {{"problem", problem}, {"phi1", phi1}, {"phi2", phi2}},
           {{"residual", r}, {"system", to_json(js)}}, "residual " + std::to_string(r) + "\n");
    } else if (*verify) {
      json arr = json::array();
      std::ostringstream text;
      bool all = true;
      std::vector<int> ids = only;
      if (ids.empty())
        for (int i = 1; i <= criterion_count; ++i) ids.push_back(i);
      for (int id : ids) {
        const auto r = run_criterion(id);
        all = all && r.pass;
        arr.push_back(to_json(r));
        if (!common.json_out) {
          std::cout << format_line(r) << "\n";
          for (const auto& d : r.details) std::cout << "    " << d << "\n";
          std::cout.flush();
        }
      }
      emit(common, "verify", {{"only", only}}, {{"criteria", arr}, {"all_pass", all}}, "");
      return all ? 0 : 3;
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConvergenceError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
