#include "hmd/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hmd/diffusion.hpp"
#include "hmd/forms.hpp"
#include "hmd/json_io.hpp"
#include "hmd/oracles.hpp"
#include "hmd/partition.hpp"
#include "hmd/rng.hpp"
#include "hmd/spectral.hpp"

namespace hmd::cli {

namespace {

using nlohmann::json;

json cut_json(const GraphDoc& doc, const CutResult& cut) {
  json j;
  j["set"] = doc.label_set(cut.set);
  j["cut_weight"] = cut.cut_weight;
  j["set_weight"] = cut.set_weight;
  j["conductance"] = cut.conductance;
  if (cut.threshold) j["threshold"] = *cut.threshold;
  return j;
}

json vector_json(const Vector& v) {
  return json{{"values", std::vector<Real>(v.data(), v.data() + v.size())}};
}

std::vector<Real> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

void write_trace(const std::string& path, const std::vector<TrajectorySample>& samples) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ParseError, "cannot open trace file '" + path + "'");
  out << "t,rayleigh,norm_w\n";
  out.precision(17);
  for (const TrajectorySample& s : samples) out << s.t << "," << s.rayleigh << "," << s.norm_w << "\n";
}

VertexSet parse_set(const GraphDoc& doc, const std::string& csv) {
  VertexSet set;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) set.push_back(doc.resolve(item));
  }
  return set;
}

struct VerifyCheck {
  std::string name;
  bool pass = true;
  Real worst = 0.0;

  void record(Real discrepancy, Real budget) {
    worst = std::max(worst, discrepancy);
    pass = pass && discrepancy <= budget;
  }
};

// Randomized invariant suite over one hypergraph; returns one entry per check.
std::vector<VerifyCheck> run_verify(const GraphDoc& doc, std::uint64_t seed) {
  const Hypergraph& h = doc.graph;
  const Index n = h.vertex_count();
  Rng rng(seed);
  DiffusionEngine engine(h);

  VerifyCheck quad{"quadratic_identity"};
  VerifyCheck interact{"interaction_identity"};
  VerifyCheck peel{"peel_identity"};
  VerifyCheck conserve{"conservation"};
  VerifyCheck ortho{"orthogonality"};
  VerifyCheck sandwich{"q0_sandwich"};
  VerifyCheck homo{"homogeneity"};
  VerifyCheck projection{"projection_invariance"};
  VerifyCheck fd{"fd_derivatives"};

  for (int trial = 0; trial < 40; ++trial) {
    DensityVector f(n);
    for (Index u = 0; u < n; ++u) f[u] = rng.uniform(-1.0, 1.0);
    if (trial % 5 == 4) {
      // exercise ties
      for (Index u = 0; u < n; ++u) f[u] = std::round(f[u] * 2.0) / 2.0;
    }
    if (norm_w(h, f) == 0.0) continue;

    const Real q = quadratic_form(h, f);
    const Real q0 = quadratic_form_q0(h, f);
    const DerivativeReport rep = derivative(h, f);
    const DensityVector& r = rep.rate;
    const Real energy = -inner_w(h, f, r);

    quad.record(std::abs(energy - q), 1e-9 * std::max<Real>(1.0, q));
    interact.record(verify_quadratic_identity(h, f), 1e-9 * std::max<Real>(1.0, q));

    Real lhs = 0.0;
    for (Index e = 0; e < h.edge_count(); ++e) {
      const EdgeExtrema ex = edge_extrema(h.edges()[e], f);
      Real rmin = r[ex.min_set.front()], rmax = r[ex.max_set.front()];
      for (Index v : ex.min_set) rmin = std::min(rmin, r[v]);
      for (Index v : ex.max_set) rmax = std::max(rmax, r[v]);
      lhs += rep.constants.receive_rate[e] * rmin - rep.constants.deliver_rate[e] * rmax;
    }
    for (Index u = 0; u < n; ++u) lhs += rep.constants.mediator_rate[u] * r[u];
    const Real rn = inner_w(h, r, r);
    peel.record(std::abs(lhs - rn), 1e-9 * std::max<Real>(1.0, rn));

    conserve.record(std::abs(h.vertex_weights().dot(r)), 1e-9);
    ortho.record(std::abs(h.vertex_weights().dot(r)),
                 1e-9 * std::max<Real>(1e-30, norm_w(h, r)) + 1e-15);

    sandwich.record(std::max(q - q0, q0 - 2.0 * q), 1e-12 * std::max<Real>(1.0, q0));

    const Real a = rng.uniform(-2.0, 2.0), b = rng.uniform(-2.0, 2.0);
    const DensityVector scaled = (a + (b * f.array())).matrix();
    const DensityVector rs = engine.rate(scaled);
    Real homo_err = 0.0;
    for (Index u = 0; u < n; ++u)
      homo_err = std::max(homo_err, std::abs(rs[u] - b * r[u]) /
                                        std::max<Real>(1.0, std::abs(b * r[u])));
    homo.record(homo_err, 1e-12);

    const DensityVector pf = project_orthogonal(h, f);
    const Real e_proj = pf.isZero(0.0) ? 0.0 : -inner_w(h, pf, engine.rate(pf));
    projection.record(std::abs(energy - e_proj), 1e-9 * std::max<Real>(1.0, std::abs(energy)));

    if (trial < 10) {
      const DerivativeCheck check = derivative_identities(h, f, 1e-4);
      if (check.differentiable) {
        const Real floor = 1e-12;
        if (check.norm_sq.err_coarse > floor)
          fd.record(std::abs(check.norm_sq.err_fine / check.norm_sq.err_coarse - 0.5), 0.2);
        if (check.energy.err_coarse > floor)
          fd.record(std::abs(check.energy.err_fine / check.energy.err_coarse - 0.5), 0.2);
      }
    }
  }

  std::vector<VerifyCheck> checks = {quad,     interact, peel, conserve, ortho,
                                     sandwich, homo,     projection, fd};

  if (n >= 2 && n <= 12) {
    VerifyCheck cheeger{"cheeger_sandwich"};
    FlowConfig cfg;
    cfg.seed = seed;
    cfg.dt = 0.02;
    cfg.t_max = 400.0;
    cfg.tol_residual = 1e-8;
    const Real g2 = estimate_gamma2(h, cfg).gamma2;
    const Real g20 = estimate_gamma2(h.without_mediators(), cfg).gamma2;
    const Real phi = oracles::brute_conductance(h).value;
    cheeger.record(0.5 * g2 - phi, 1e-2);
    cheeger.record(phi - 2.0 * std::sqrt(g2), 1e-9);
    cheeger.record(phi - std::sqrt(2.0 * g20), 1e-2);
    checks.push_back(cheeger);
  }
  return checks;
}

int dispatch(const std::vector<std::string>& args, CommandResult& result) {
  CLI::App app{"spectral toolkit for mediator diffusion on hypergraphs"};
  app.name("hmd");
  app.require_subcommand(1);

  std::string graph_path, vector_path, trace_path, set_csv, variant = "q";
  FlowConfig cfg;
  bool strict = false, full_report = false;
  std::uint64_t seed = 0;
  int oracle_samples = 32, oracle_iters = 60;

  auto add_graph = [&](CLI::App* cmd) {
    cmd->add_option("graph", graph_path, "hypergraph JSON (path or - for stdin)")->required();
  };
  auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "random seed")->envname("HMD_SEED");
  };
  auto add_flow = [&](CLI::App* cmd) {
    cmd->add_option("--dt", cfg.dt, "Euler step size");
    cmd->add_option("--t-max", cfg.t_max, "integration horizon");
    cmd->add_option("--tol", cfg.tol_residual, "eigen-residual tolerance");
    cmd->add_option("--eps-eq", cfg.eps_eq, "tie tolerance relative to the vector span");
    add_seed(cmd);
  };

  CLI::App* info = app.add_subcommand("info", "summarize a hypergraph");
  add_graph(info);
  info->callback([&] {
    const GraphDoc doc = load_graph(graph_path);
    json j;
    j["n"] = doc.graph.vertex_count();
    j["m"] = doc.graph.edge_count();
    j["total_weight"] = doc.graph.total_weight();
    j["vertex_weights"] = to_std(doc.graph.vertex_weights());
    j["labels"] = doc.labels;
    result.out = j.dump(2) + "\n";
  });

  CLI::App* quadratic = app.add_subcommand("quadratic", "evaluate the quadratic form");
  add_graph(quadratic);
  quadratic->add_option("--vector", vector_path, "density vector JSON")->required();
  quadratic->add_option("--variant", variant, "q (mediator form) or q0 (direct form)")
      ->check(CLI::IsMember({"q", "q0"}));
  quadratic->callback([&] {
    const GraphDoc doc = load_graph(graph_path);
    const DensityVector f = load_vector(vector_path);
    const Real value =
        variant == "q0" ? quadratic_form_q0(doc.graph, f) : quadratic_form(doc.graph, f);
    result.out = json{{"value", value}}.dump(2) + "\n";
  });

  CLI::App* cond = app.add_subcommand("conductance", "conductance of an explicit set");
  add_graph(cond);
  cond->add_option("--set", set_csv, "comma separated vertex labels")->required();
  cond->callback([&] {
    const GraphDoc doc = load_graph(graph_path);
    const CutResult cut = conductance(doc.graph, parse_set(doc, set_csv));
    result.out = cut_json(doc, cut).dump(2) + "\n";
  });

  CLI::App* cond_exact = app.add_subcommand("conductance-exact", "exhaustive hypergraph conductance");
  add_graph(cond_exact);
  cond_exact->callback([&] {
    const GraphDoc doc = load_graph(graph_path);
    const auto [cut, phi] = exact_conductance(doc.graph);
    json j;
    j["phi_H"] = phi;
    j["witness"] = doc.label_set(cut.set);
    j["cut"] = cut_json(doc, cut);
    result.out = j.dump(2) + "\n";
  });

  CLI::App* deriv = app.add_subcommand("derivative", "rate of change of the diffusion");
  add_graph(deriv);
  deriv->add_option("--vector", vector_path, "density vector JSON")->required();
  deriv->add_option("--eps-eq", cfg.eps_eq, "tie tolerance relative to the vector span");
  deriv->add_flag("--report", full_report, "include per-class peel certificate");
  deriv->callback([&] {
    const GraphDoc doc = load_graph(graph_path);
    const DensityVector f = load_vector(vector_path);
    const DerivativeReport rep = derivative(doc.graph, f, cfg.eps_eq);
    json j;
    j["rate"] = to_std(rep.rate);
    if (full_report) {
      j["constants"] = {{"receive", to_std(rep.constants.receive_rate)},
                        {"deliver", to_std(rep.constants.deliver_rate)},
                        {"mediator", to_std(rep.constants.mediator_rate)}};
      json classes = json::array();
      for (const ClassReport& cls : rep.classes) {
        json jc;
        jc["members"] = doc.label_set(cls.members);
        json peels = json::array();
        for (const PeelStep& p : cls.peels)
          peels.push_back({{"set", doc.label_set(p.set)}, {"delta", p.density}});
        jc["peels"] = peels;
        classes.push_back(jc);
      }
      j["classes"] = classes;
    }
    result.out = j.dump(2) + "\n";
  });

  CLI::App* diffuse = app.add_subcommand("diffuse", "integrate the flow from a start vector");
  add_graph(diffuse);
  diffuse->add_option("--vector", vector_path, "start vector JSON")->required();
  diffuse->add_option("--trace", trace_path, "write t,rayleigh,norm_w CSV here");
  cfg.renormalize = false;
  bool renormalize_flag = false;
  diffuse->add_flag("--renormalize", renormalize_flag, "keep ||f||_w = 1 during the flow");
  add_flow(diffuse);
  diffuse->callback([&] {
    const GraphDoc doc = load_graph(graph_path);
    const DensityVector f0 = load_vector(vector_path);
    cfg.renormalize = renormalize_flag;
    const FlowResult run = integrate(doc.graph, f0, cfg);
    if (!trace_path.empty()) write_trace(trace_path, run.trajectory);
    json j = vector_json(run.f);
    j["rayleigh"] = run.final_rayleigh;
    j["residual"] = run.residual;
    j["converged"] = run.converged;
    result.out = j.dump(2) + "\n";
    if (strict && !run.converged) result.exit_code = 3;
  });

  CLI::App* eig2 = app.add_subcommand("eig2", "estimate the second eigenvalue by gradient flow");
  add_graph(eig2);
  eig2->add_option("--restarts", cfg.restarts, "number of seeded random starts");
  eig2->add_option("--trace", trace_path, "write the best run's trajectory CSV here");
  eig2->add_flag("--strict", strict, "exit 3 when the residual tolerance is not reached");
  add_flow(eig2);
  eig2->callback([&] {
    const GraphDoc doc = load_graph(graph_path);
    cfg.seed = seed;
    const SpectralEstimate est = estimate_gamma2(doc.graph, cfg);
    if (!trace_path.empty()) write_trace(trace_path, est.trajectory);
    json j;
    j["gamma2"] = est.gamma2;
    j["eigvec"] = to_std(est.eigvec);
    j["residual"] = est.residual;
    j["restarts"] = est.restarts_used;
    j["converged"] = est.converged;
    j["dt"] = est.dt_used;
    j["monotone_ok"] = est.monotone_ok;
    result.out = j.dump(2) + "\n";
    if (strict && !est.converged) {
      result.err = "eig2 did not reach the residual tolerance\n";
      result.exit_code = 3;
    }
  });

  CLI::App* sweep = app.add_subcommand("sweep", "best threshold cut of a vector");
  add_graph(sweep);
  sweep->add_option("--vector", vector_path, "density vector JSON")->required();
  sweep->callback([&] {
    const GraphDoc doc = load_graph(graph_path);
    const CutResult cut = sweep_cut(doc.graph, load_vector(vector_path));
    result.out = cut_json(doc, cut).dump(2) + "\n";
  });

  CLI::App* part = app.add_subcommand("partition", "spectral cut with certificate bounds");
  add_graph(part);
  part->add_option("--restarts", cfg.restarts, "number of seeded random starts");
  add_flow(part);
  part->callback([&] {
    const GraphDoc doc = load_graph(graph_path);
    cfg.seed = seed;
    const auto [cut, cert] = spectral_partition(doc.graph, cfg);
    VertexSet complement;
    for (Index u = 0; u < doc.graph.vertex_count(); ++u)
      if (!std::binary_search(cut.set.begin(), cut.set.end(), u)) complement.push_back(u);
    const Real phi_comp = conductance(doc.graph, complement).conductance;
    json j;
    j["cut"] = cut_json(doc, cut);
    j["phi_complement"] = phi_comp;
    j["phi_objective"] = std::max(cut.conductance, phi_comp);
    j["certificate"] = {{"gamma2_hat", cert.gamma2_hat},
                        {"gamma2_zero_hat", cert.gamma2_zero_hat},
                        {"phi_cut", cert.phi_cut},
                        {"lower", cert.lower},
                        {"upper", cert.upper},
                        {"upper_sqrt", cert.upper_sqrt},
                        {"lower_ok", cert.lower_ok},
                        {"upper_ok", cert.upper_ok},
                        {"upper_sqrt_ok", cert.upper_sqrt_ok},
                        {"sandwich_ok", cert.sandwich_ok}};
    result.out = j.dump(2) + "\n";
  });

  CLI::App* verify = app.add_subcommand("verify", "run the invariant suite on a hypergraph");
  add_graph(verify);
  add_seed(verify);
  verify->callback([&] {
    const GraphDoc doc = load_graph(graph_path);
    const std::vector<VerifyCheck> checks = run_verify(doc, seed);
    json items = json::array();
    bool all = true;
    for (const VerifyCheck& c : checks) {
      items.push_back({{"name", c.name}, {"pass", c.pass}, {"worst", c.worst}});
      all = all && c.pass;
    }
    result.out = json{{"checks", items}, {"all_pass", all}}.dump(2) + "\n";
    if (!all) {
      result.err = "one or more checks failed\n";
      result.exit_code = 3;
    }
  });

  CLI::App* oracle = app.add_subcommand("oracle", "brute-force references (debugging)");
  oracle->require_subcommand(1);

  CLI::App* ob = oracle->add_subcommand("conductance", "exhaustive conductance");
  add_graph(ob);
  ob->callback([&] {
    const GraphDoc doc = load_graph(graph_path);
    const oracles::OracleResult res = oracles::brute_conductance(doc.graph);
    result.out =
        json{{"phi_H", res.value}, {"witness", doc.label_set(res.witness)}}.dump(2) + "\n";
  });

  CLI::App* od = oracle->add_subcommand("densest", "exhaustive densest subsets per class");
  add_graph(od);
  od->add_option("--vector", vector_path, "density vector JSON")->required();
  od->add_option("--eps-eq", cfg.eps_eq, "tie tolerance relative to the vector span");
  od->callback([&] {
    const GraphDoc doc = load_graph(graph_path);
    const DensityVector f = load_vector(vector_path);
    json classes = json::array();
    for (const DensestInstance& inst : densest_instances(doc.graph, f, cfg.eps_eq)) {
      const auto [set, delta] = oracles::brute_densest_subset(inst);
      classes.push_back({{"members", doc.label_set(inst.members)},
                         {"set", doc.label_set(set)},
                         {"delta", delta}});
    }
    result.out = json{{"classes", classes}}.dump(2) + "\n";
  });

  CLI::App* oe = oracle->add_subcommand("eig", "dense eigensolve for 2-uniform graphs");
  add_graph(oe);
  oe->callback([&] {
    const GraphDoc doc = load_graph(graph_path);
    result.out = json{{"eigenvalues", oracles::dense_eigensolve_2graph(doc.graph)}}.dump(2) + "\n";
  });

  CLI::App* orr = oracle->add_subcommand("rayleigh", "coordinate-descent discrepancy minimum");
  add_graph(orr);
  orr->add_option("--samples", oracle_samples, "random restarts");
  orr->add_option("--iters", oracle_iters, "descent sweeps per restart");
  add_seed(orr);
  orr->callback([&] {
    const GraphDoc doc = load_graph(graph_path);
    const oracles::OracleResult res =
        oracles::brute_rayleigh_min(doc.graph, oracle_samples, oracle_iters, seed);
    json j;
    j["value"] = res.value;
    j["vector"] = to_std(res.witness_vector);
    result.out = j.dump(2) + "\n";
  });

  std::vector<char*> argv;
  std::vector<std::string> storage = args;
  storage.insert(storage.begin(), "hmd");
  argv.reserve(storage.size());
  for (std::string& s : storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    result.out = app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    result.err = std::string(e.what()) + "\n";
    return 2;
  }
  return result.exit_code;
}

}  // namespace

CommandResult run(const std::vector<std::string>& args) {
  CommandResult result;
  try {
    result.exit_code = dispatch(args, result);
  } catch (const Error& e) {
    result.err = std::string(e.what()) + "\n";
    result.exit_code = e.code() == ErrorCode::StepTooLarge ? 3 : 2;
  } catch (const std::exception& e) {
    result.err = std::string(e.what()) + "\n";
    result.exit_code = 2;
  }
  return result;
}

}  // namespace hmd::cli
