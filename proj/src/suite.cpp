#include "udist/suite.hpp"

#include "udist/resolution.hpp"

#include <algorithm>
#include <chrono>
#include <functional>

namespace udist {

using ojson = nlohmann::ordered_json;

namespace {

struct Outcome {
  bool pass = false;
  ojson details = ojson::object();
};

struct Task {
  std::string name;
  std::vector<std::uint64_t> key;
  std::function<Outcome()> run;
};

const std::map<std::string, std::string>& anchors() {
  static const std::map<std::string, std::string> a = {
      {"basis_corollary", "recursive systems with b_1 = cbar_1 form a basis"},
      {"canonical_basis", "canonical basis cbar_g of H0 and its recursion"},
      {"d_ell_properties", "D_l is well defined and linear"},
      {"delta_containment", "diagonal shift maps K(r) into K(r/l)"},
      {"delta_identities", "diagonal shift commutation identities"},
      {"epsilon_conjugation", "epsilon twist against the reference conventions"},
      {"euler_relations", "Euler system relations of x_r"},
      {"frob_regularity", "l - Frob_l is injective on U_{r/l}"},
      {"h0_dimension", "H0(G_r, U_r/MU_r) has rank 2^omega(r)"},
      {"h0_of_K", "H0 of the double complex equals H0(G_r, U_r/MU_r)"},
      {"iterated_recursion", "D_l1 ... D_ln c_r = c_1"},
      {"k_identities", "anticommuting differentials of K"},
      {"kolyvagin_class", "universal Kolyvagin class c_r is invariant"},
      {"l_cohomology", "L(r) resolves U_r"},
      {"negative_drop", "negative control: dropped distribution relation"},
      {"negative_perturbation", "negative control: perturbed derivative"},
      {"norm_identity", "N'_l (sigma_l - 1) = l - 1 - N_l"},
      {"reduction_sequence", "0 -> U_{r/l} -> U_{r/l} -> U_r/I_l -> 0"},
      {"s_stability", "dK + deltaK in S + MK"},
      {"shift_equals_D", "diagonal shift induces D_l"},
      {"sigma_sequence", "short exact sequence of complexes for sigma_l"},
      {"u_structure", "U_r free of rank phi(r), embeddings saturated"},
      {"universal_recursion", "universal Kolyvagin recursion D_l c_r = c_{r/l}"},
  };
  return a;
}

std::uint64_t phi_of(const Level& level) {
  std::uint64_t phi = 1;
  for (auto p : level.primes()) phi *= p - 1;
  return phi;
}

ojson integers(const std::vector<Integer>& v) {
  ojson out = ojson::array();
  for (const auto& x : v) out.push_back(x.get_str());
  return out;
}

ojson mod_vector(const ModVector& v) {
  ojson out = ojson::object();
  for (const auto& e : v) out[std::to_string(e.index)] = e.value;
  return out;
}

ModVector mod_sum(ModVector a, const ModVector& b, std::uint32_t modulus) {
  mod_axpy(a, b, 1, modulus);
  return a;
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    default:
      return "error";
  }
}

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [k, v] : anchors()) n.push_back(k);
    return n;
  }();
  return names;
}

SuiteConfig config_from_json(const nlohmann::json& j) {
  SuiteConfig c;
  try {
    if (j.contains("M")) c.M = j.at("M").get<std::uint32_t>();
    if (j.contains("primes")) c.primes = j.at("primes").get<std::vector<std::uint32_t>>();
    if (j.contains("roots"))
      for (const auto& [k, v] : j.at("roots").items()) c.roots[static_cast<std::uint32_t>(std::stoul(k))] = v.get<std::uint32_t>();
    if (j.contains("max_omega") && !j.at("max_omega").is_null()) c.max_omega = j.at("max_omega").get<std::size_t>();
    if (j.contains("checks")) c.checks = j.at("checks").get<std::vector<std::string>>();
    if (j.contains("timing")) c.timing = j.at("timing").get<bool>();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

nlohmann::json config_to_json(const SuiteConfig& c) {
  nlohmann::json j;
  j["M"] = c.M;
  j["primes"] = c.primes;
  nlohmann::json roots = nlohmann::json::object();
  for (const auto& [k, v] : c.roots) roots[std::to_string(k)] = v;
  j["roots"] = roots;
  j["max_omega"] = c.max_omega ? nlohmann::json(*c.max_omega) : nlohmann::json(nullptr);
  j["checks"] = c.checks.empty() ? std::vector<std::string>{"all"} : c.checks;
  return j;
}

Context build_context(const SuiteConfig& config) {
  Context ctx;
  try {
    ctx = Context::build(config.M, config.primes, config.roots);
  } catch (const ContextError& e) {
    throw ConfigError(e.what());
  }
  if (config.max_omega && *config.max_omega > config.primes.size())
    throw ConfigError("max_omega exceeds the number of pool primes");
  for (const auto& name : config.checks)
    if (name != "all" && !anchors().count(name)) throw ConfigError("unknown check: " + name);
  return ctx;
}

std::vector<std::uint64_t> suite_levels(const Context& ctx, std::optional<std::size_t> max_omega) {
  const Level full(ctx, ctx.full_level());
  std::vector<std::uint64_t> out;
  for (auto r : full.divisors())
    if (!max_omega || Level(ctx, r).omega() <= *max_omega) out.push_back(r);
  return out;
}

SuiteResult run_suite(const SuiteConfig& config) {
  Workspace ws(build_context(config));
  KWorkspace kws(ws);
  return run_suite(config, ws, kws);
}

SuiteResult run_suite(const SuiteConfig& config, const Workspace& ws, const KWorkspace& kws) {
  const Context& ctx = ws.context();
  const std::uint32_t M = ws.M();
  const auto levels = suite_levels(ctx, config.max_omega);
  auto selected = [&](const std::string& name) {
    if (config.checks.empty()) return true;
    return std::find(config.checks.begin(), config.checks.end(), "all") != config.checks.end() ||
           std::find(config.checks.begin(), config.checks.end(), name) != config.checks.end();
  };

  std::vector<Task> tasks;
  auto add = [&](const std::string& name, std::vector<std::uint64_t> key, std::function<Outcome()> run) {
    if (selected(name)) tasks.push_back({name, std::move(key), std::move(run)});
  };

  std::vector<std::uint32_t> used_primes;
  for (auto p : ctx.primes())
    for (auto r : levels)
      if (r % p == 0) {
        used_primes.push_back(p);
        break;
      }
  for (auto ell : used_primes)
    add("norm_identity", {0, ell}, [&ctx, ell] { return Outcome{norm_identity_check(ctx, ell), ojson::object()}; });

  for (auto r : levels) {
    const Level level(ctx, r);

    add("u_structure", {r}, [&, r] {
      const LevelData& data = ws.level(r);
      Outcome o;
      const std::uint64_t phi = phi_of(data.level);
      o.details["phi"] = phi;
      o.details["rank"] = data.u.module.free_rank();
      o.details["torsion_free"] = data.u.module.is_free();
      o.pass = data.u.module.free_rank() == phi && data.u.module.is_free();
      ojson emb = ojson::array();
      for (auto ell : data.level.primes()) {
        const EmbeddingReport e = embed_U(ws.level(r / ell).u, data.u);
        emb.push_back({{"from", r / ell}, {"injective", e.injective}, {"cokernel_free", e.cokernel_free},
                       {"cokernel_rank", e.cokernel_rank}});
        o.pass = o.pass && e.injective && e.cokernel_free;
      }
      o.details["embeddings"] = emb;
      return o;
    });

    add("l_cohomology", {r}, [&, r] {
      const LevelData& data = ws.level(r);
      const LComplex l(data.level);
      const LCohomologyReport rep = cohomology_of_L(l, data.u);
      Outcome o;
      ojson groups = ojson::array();
      for (std::size_t k = 0; k < rep.groups.size(); ++k)
        groups.push_back({{"degree", -static_cast<long>(k)},
                          {"free_rank", rep.groups[k].free_rank},
                          {"torsion", integers(rep.groups[k].torsion)}});
      o.details["groups"] = groups;
      o.details["euler_characteristic"] = rep.euler_characteristic;
      const bool d2 = d_squared_zero(l), eq = d_equivariant(l);
      bool s = true;
      for (auto ell : data.level.primes()) s = s && s_ell_anticommutes(l, LComplex(ws.level(r / ell).level), ell);
      o.details["d_squared_zero"] = d2;
      o.details["equivariant"] = eq;
      o.details["s_ell_anticommutes"] = s;
      o.details["concentrated"] = rep.concentrated;
      o.details["h0_isomorphic"] = rep.h0_isomorphic;
      o.pass = rep.concentrated && rep.h0_isomorphic && d2 && eq && s;
      return o;
    });

    add("h0_dimension", {r}, [&, r] {
      const LevelData& data = ws.level(r);
      Outcome o;
      const auto dim = data.h0.dimension(M);
      const std::size_t expected = std::size_t{1} << data.level.omega();
      bool invariant = true;
      for (const auto& b : data.h0.basis) invariant = invariant && is_invariant(data, b, M);
      o.details["dimension"] = dim ? ojson(*dim) : ojson(nullptr);
      o.details["expected"] = expected;
      o.details["order_factors"] = data.h0.order_factors;
      o.details["basis_invariant"] = invariant;
      o.pass = dim && *dim == expected && invariant;
      return o;
    });

    add("kolyvagin_class", {r}, [&, r] {
      const KolyvaginClass c = universal_kolyvagin_class(ws, r);
      Outcome o;
      o.details["chain_support"] = c.chain.size();
      o.details["invariant"] = c.invariant;
      if (ws.level(r).phi <= 32) o.details["coordinates"] = mod_vector(c.cls);
      o.pass = c.invariant;
      return o;
    });

    add("universal_recursion", {r}, [&, r] {
      Outcome o;
      o.pass = true;
      ojson steps = ojson::array();
      for (const auto& s : recursion_check_universal(ws, r)) {
        steps.push_back({{"ell", s.ell}, {"identity", s.identity}, {"invariant", s.invariant},
                         {"recursion", s.recursion}, {"note", s.note}});
        o.pass = o.pass && s.pass();
      }
      o.details["steps"] = steps;
      return o;
    });

    add("iterated_recursion", {r}, [&, r] {
      Outcome o;
      std::vector<std::uint32_t> order = ws.level(r).level.primes();
      const ModVector target = universal_kolyvagin_class(ws, 1).cls;
      const ModVector start = universal_kolyvagin_class(ws, r).cls;
      std::size_t orders = 0;
      o.pass = true;
      do {
        ModVector cls = start;
        std::uint64_t cur = r;
        for (auto ell : order) {
          const DResult d = D_ell(ws, cur, ell, cls);
          o.pass = o.pass && d.ok();
          cls = d.cls;
          cur /= ell;
        }
        o.pass = o.pass && cls == target;
        ++orders;
      } while (std::next_permutation(order.begin(), order.end()));
      o.details["orders"] = orders;
      return o;
    });

    add("k_identities", {r}, [&, r] {
      const KWindow& w = kws.window(r);
      const KIdentityReport rep = differential_identity_check(w);
      Outcome o{rep.pass(), {{"window_bound", w.bound()}, {"symbols", w.size()}, {"evaluations", rep.evaluations},
                             {"anticommute", rep.anticommute}, {"squares_zero", rep.squares_zero},
                             {"totals_zero", rep.totals_zero}, {"equivariant", rep.equivariant}}};
      if (!rep.counterexample.empty()) o.details["counterexample"] = rep.counterexample;
      return o;
    });

    add("epsilon_conjugation", {r}, [&, r] {
      const EpsilonReport rep = epsilon_check(kws.window(r));
      Outcome o{rep.pass(), {{"involution", rep.involution}, {"d_conjugation", rep.d_conjugation},
                             {"delta_conjugation", rep.delta_conjugation}}};
      if (!rep.counterexample.empty()) o.details["counterexample"] = rep.counterexample;
      return o;
    });

    add("s_stability", {r}, [&, r] {
      const SStabilityReport rep = s_stability_check(kws.window(r), M);
      Outcome o{rep.pass(), {{"boundaries_in_S", rep.boundaries_in_S}, {"d_stable", rep.d_stable},
                             {"delta_stable", rep.delta_stable}, {"sigma_stable", rep.sigma_stable},
                             {"epsilon_stable", rep.epsilon_stable}}};
      if (!rep.counterexample.empty()) o.details["counterexample"] = rep.counterexample;
      return o;
    });

    add("delta_identities", {r}, [&, r] {
      const ShiftIdentityReport rep = shift_identity_check(kws.window(r), M);
      return Outcome{rep.identities(), {{"commutes_d", rep.commutes_d}, {"commutes_delta", rep.commutes_delta},
                                        {"kills_d", rep.kills_d}, {"delta_commutator", rep.delta_commutator}}};
    });

    add("delta_containment", {r}, [&, r] {
      const ShiftIdentityReport rep = shift_identity_check(kws.window(r), M);
      Outcome o{rep.containment, {{"failures", rep.containment_failures}}};
      if (!rep.containment) o.details["counterexample"] = rep.counterexample;
      return o;
    });

    add("h0_of_K", {r}, [&, r] {
      const H0KReport rep = h0_of_K_check(kws, r);
      return Outcome{rep.pass(),
                     {{"well_defined", rep.well_defined}, {"boundaries_closed", rep.boundaries_closed},
                      {"lands_in_h0", rep.lands_in_h0}, {"bijective", rep.bijective},
                      {"cocycle_order", rep.cocycle_order.get_str()}, {"coboundary_order", rep.coboundary_order.get_str()},
                      {"image_order", rep.image_order.get_str()}, {"h0_order", rep.h0_order.get_str()}}};
    });

    add("canonical_basis", {r}, [&, r] {
      const CanonicalBasis& b = kws.canonical(r);
      const CanonicalRecursionReport rec = canonical_recursion_check(kws, r);
      Outcome o{b.pass() && rec.pass_all,
                {{"divisors", b.divisors}, {"solvable", b.solvable}, {"unique", b.unique},
                 {"cocycles", b.cocycles_ok}, {"in_h0", b.in_h0}, {"is_basis", b.is_basis},
                 {"recursion", rec.pass_all}}};
      if (!rec.counterexample.empty()) o.details["counterexample"] = rec.counterexample;
      return o;
    });

    add("basis_corollary", {r}, [&, r] {
      const BasisCorollaryReport rep = basis_corollary_check(kws, r);
      Outcome o{rep.pass(), {{"divisors", rep.divisors}, {"expressible", rep.expressible},
                             {"normalized", rep.normalized}, {"unitriangular", rep.unitriangular},
                             {"determinant", rep.determinant}}};
      if (rep.divisors.size() <= 16) o.details["matrix"] = rep.matrix;
      return o;
    });

    if (r > 1)
      add("negative_drop", {r}, [&, r] {
        const LevelData& data = ws.level(r);
        const UModule dropped = build_U(data.level, 0);
        const bool detected = dropped.module.free_rank() != phi_of(data.level) || !dropped.module.is_free();
        return Outcome{detected, {{"dropped", 0}, {"rank", dropped.module.free_rank()}, {"phi", phi_of(data.level)}}};
      });

    for (auto ell : level.primes()) {
      add("euler_relations", {r, ell}, [&, r, ell] {
        const EulerRelations e = euler_relations_check(ws.level(r).u, ell);
        return Outcome{e.norm_relation && e.congruence, {{"norm_relation", e.norm_relation}, {"congruence", e.congruence}}};
      });
      add("frob_regularity", {r, ell}, [&, r, ell] {
        return Outcome{frob_regularity_check(ws.level(r / ell).u, ell), {{"level", r / ell}}};
      });
      add("reduction_sequence", {r, ell}, [&, r, ell] {
        const ReductionSequence s = reduction_sequence_check(ws.level(r).u, ws.level(r / ell).u, ell);
        return Outcome{s.pass(),
                       {{"injective", s.injective}, {"well_defined", s.well_defined}, {"surjective", s.surjective},
                        {"exact_middle", s.exact_middle}, {"cokernel_factors", integers(s.cokernel_factors)},
                        {"quotient_factors", integers(s.quotient_factors)}, {"quotient_rank", s.quotient_rank}}};
      });
      add("sigma_sequence", {r, ell}, [&, r, ell] {
        const SigmaSequenceReport s = sigma_sequence_check(ws.level(r).u, ws.level(r / ell).u, ell);
        return Outcome{s.pass(),
                       {{"quotient_free", s.quotient_free}, {"l_prime_stable", s.l_prime_stable},
                        {"chain_maps", s.chain_maps}, {"short_exact", s.short_exact},
                        {"h_minus_one_zero", s.h_minus_one_zero}, {"lower_degrees_zero", s.lower_degrees_zero},
                        {"h0_matches", s.h0_matches}}};
      });
      add("d_ell_properties", {r, ell}, [&, r, ell] {
        const LevelData& data = ws.level(r);
        const auto& basis = data.h0.basis;
        std::vector<DResult> images;
        bool lifts = true, lands = true;
        for (const auto& b : basis) {
          images.push_back(D_ell(ws, r, ell, b));
          const DResult rev = D_ell(ws, r, ell, b, DVariant::ReversedSolver);
          const DResult shifted = D_ell(ws, r, ell, b, DVariant::ShiftedLift);
          lifts = lifts && images.back().ok() && rev.ok() && shifted.ok() && rev.cls == images.back().cls &&
                  shifted.cls == images.back().cls;
          lands = lands && images.back().lands_in_h0;
        }
        bool linear = true;
        for (std::size_t i = 0; i < basis.size(); ++i)
          for (std::size_t k = i; k < basis.size(); ++k) {
            const DResult d = D_ell(ws, r, ell, mod_sum(basis[i], basis[k], M));
            linear = linear && d.ok() && d.cls == mod_sum(images[i].cls, images[k].cls, M);
          }
        const DResult zero = D_ell(ws, r, ell, ModVector{});
        const bool kills_zero = zero.ok() && zero.cls.empty();
        return Outcome{lifts && lands && linear && kills_zero,
                       {{"basis_size", basis.size()}, {"choice_independent", lifts}, {"lands_in_h0", lands},
                        {"linear", linear}, {"zero", kills_zero}}};
      });
      add("shift_equals_D", {r, ell}, [&, r, ell] {
        const ShiftDReport rep = shift_equals_D_check(kws, r, ell);
        Outcome o{rep.pass(), {{"classes", rep.classes_checked}, {"cocycle", rep.cocycle}, {"equal", rep.equal}}};
        if (!rep.counterexample.empty()) o.details["counterexample"] = rep.counterexample;
        return o;
      });
      add("negative_perturbation", {r, ell}, [&, r, ell] {
        const Perturbation p{ell};
        const GroupRingElement perturbed = derivative_element(Level(ctx, std::vector<std::uint32_t>{ell}), ell, &p);
        const bool norm_detected = !norm_identity_check(ctx, ell, &perturbed);
        bool recursion_detected = false;
        for (const auto& s : recursion_check_universal(ws, r, &p)) recursion_detected = recursion_detected || !s.pass();
        return Outcome{norm_detected && recursion_detected,
                       {{"norm_identity_detected", norm_detected}, {"recursion_detected", recursion_detected}}};
      });
    }
  }

  // Largest levels first so the expensive tasks start early.
  std::vector<std::size_t> order(tasks.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return tasks[a].key.front() > tasks[b].key.front(); });

  std::vector<CheckReport> reports(tasks.size());
  std::vector<std::string> contradictions(tasks.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long t = 0; t < static_cast<long>(order.size()); ++t) {
    const std::size_t i = order[static_cast<std::size_t>(t)];
    const Task& task = tasks[i];
    CheckReport& rep = reports[i];
    rep.name = task.name;
    rep.anchor = anchors().at(task.name);
    rep.params = ojson::object();
    rep.params["M"] = M;
    if (task.key.front() != 0) rep.params["r"] = task.key.front();
    if (task.key.size() > 1) rep.params["ell"] = task.key[1];
    const auto start = std::chrono::steady_clock::now();
    try {
      Outcome o = task.run();
      rep.verdict = o.pass ? Verdict::pass : Verdict::fail;
      rep.details = std::move(o.details);
    } catch (const InternalContradiction& e) {
      rep.verdict = Verdict::error;
      rep.details = {{"internal_contradiction", e.what()}};
      contradictions[i] = task.name + ": " + e.what();
    } catch (const std::exception& e) {
      rep.verdict = Verdict::error;
      rep.details = {{"exception", e.what()}};
    }
    if (config.timing)
      rep.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }

  std::vector<std::size_t> sorted(tasks.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) sorted[i] = i;
  std::sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
    if (tasks[a].name != tasks[b].name) return tasks[a].name < tasks[b].name;
    return tasks[a].key < tasks[b].key;
  });

  SuiteResult result;
  for (auto i : sorted) {
    result.reports.push_back(std::move(reports[i]));
    if (result.diagnostic.empty() && !contradictions[i].empty()) result.diagnostic = contradictions[i];
  }
  const bool all_pass = std::all_of(result.reports.begin(), result.reports.end(),
                                    [](const CheckReport& r) { return r.verdict == Verdict::pass; });
  result.exit_code = !result.diagnostic.empty() ? 3 : all_pass ? 0 : 1;
  return result;
}

}  // namespace udist
