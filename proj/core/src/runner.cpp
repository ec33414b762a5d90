#include "hace/runner.hpp"

#if __has_include(<nlohmann/json.hpp>)
#include <nlohmann/json.hpp>
#else
#include <json.hpp>
#endif
#include <sstream>

#include "hace/apps.hpp"
#include "hace/config.hpp"
#include "hace/generate.hpp"
#include "hace/kusarigama.hpp"
#include "hace/twisted.hpp"

namespace hace {

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::SizeCapExceeded: return 2;
    case ErrorKind::ParseError:
    case ErrorKind::ResolutionError: return 3;
    case ErrorKind::MissingIdentity:
    case ErrorKind::NonAssociative:
    case ErrorKind::IllTypedComposite:
    case ErrorKind::DanglingId:
    case ErrorKind::CyclicGraph:
    case ErrorKind::NotAPoset:
    case ErrorKind::NotAMonoid:
    case ErrorKind::InterchangeFailure:
    case ErrorKind::NonFunctorialSlot:
    case ErrorKind::NotFunctorial:
    case ErrorKind::NotNatural:
    case ErrorKind::ShapeMismatch:
    case ErrorKind::NotALattice:
    case ErrorKind::NotStrictMonoidal: return 4;
    default: return 5;
  }
}

int exit_code(Report const& r) {
  bool failed = false;
  for (auto const& j : r.jobs) {
    if (j.error) {
      return exit_code_for(*j.error);
    }
    for (auto const& c : j.checks) {
      failed = failed || !c.ok;
    }
  }
  return failed ? 1 : 0;
}

namespace {

  CheckRecord from(std::string name, LawReport const& r) {
    return {std::move(name), r.ok, r.counts, r.failures};
  }
  CheckRecord from(std::string name, CountCheck const& r) {
    return {std::move(name), r.ok, r.counts, r.failures};
  }
  CheckRecord from(std::string name, Verdict const& v) {
    return {std::move(name), v.ok, {}, v.violations};
  }
  CheckRecord from(std::string name, UniversalReport const& u) {
    return {std::move(name), u.ok, {u.apexes, u.wedges, u.factorizations}, u.failures};
  }

  CarrierRecord carrier_of(std::string name, FinSet const& s,
                           std::vector<FinFn> const& legs) {
    CarrierRecord c{std::move(name), s.labels(), {}};
    for (auto const& l : legs) {
      c.legs.push_back(l.table());
    }
    return c;
  }

  bool same(CarrierRecord const& a, CarrierRecord const& b) {
    return a.elements == b.elements && a.legs == b.legs;
  }

  std::string sig_name(VarianceSig s) {
    return to_string(s);
  }

  // Builds end carriers under every method and records their agreement.
  void end_job(JobRecord& j, std::string const& name, SetFunctorPQ const& F,
               std::vector<EndMethod> const& methods, bool keep_carrier) {
    std::vector<CarrierRecord> cs;
    std::vector<std::size_t>   sizes;
    std::optional<EndPQ>       first;
    for (auto m : methods) {
      EndPQ e = end_pq(F, m);
      cs.push_back(carrier_of("end(" + name + ")", e.carrier.carrier, e.carrier.legs));
      sizes.push_back(e.carrier.carrier.size());
      if (!first) {
        first = e;
      }
    }
    CheckRecord agree{"methods-agree end " + name, true, sizes, {}};
    for (std::size_t k = 1; k < cs.size(); ++k) {
      if (!same(cs[0], cs[k])) {
        agree.ok = false;
        agree.failures.push_back(to_string(methods[k]) + " differs from "
                                 + to_string(methods[0]));
      }
    }
    if (keep_carrier && !cs.empty()) {
      j.carriers.push_back(cs[0]);
    }
    j.checks.push_back(agree);
    if (first) {
      j.checks.push_back(from("wedge " + name, check_wedge(first->wedge(), F)));
    }
  }

  void coend_job(JobRecord& j, std::string const& name, SetFunctorPQ const& F,
                 std::vector<EndMethod> const& methods, bool keep_carrier) {
    std::vector<CarrierRecord> cs;
    std::vector<std::size_t>   sizes;
    std::optional<CoendPQ>     first;
    for (auto m : methods) {
      CoendPQ e = coend_pq(F, m);
      cs.push_back(carrier_of("coend(" + name + ")", e.carrier.carrier, e.carrier.legs));
      sizes.push_back(e.carrier.carrier.size());
      if (!first) {
        first = e;
      }
    }
    CheckRecord agree{"methods-agree coend " + name, true, sizes, {}};
    for (std::size_t k = 1; k < cs.size(); ++k) {
      if (!same(cs[0], cs[k])) {
        agree.ok = false;
        agree.failures.push_back(to_string(methods[k]) + " differs from "
                                 + to_string(methods[0]));
      }
    }
    if (keep_carrier && !cs.empty()) {
      j.carriers.push_back(cs[0]);
    }
    j.checks.push_back(agree);
    if (first) {
      j.checks.push_back(from("cowedge " + name, check_cowedge(first->cowedge(), F)));
    }
  }

  std::string tuple_names(FinCat const& c, Tuple const& t, std::size_t p) {
    std::string out = "(";
    for (std::size_t i = 0; i < t.size(); ++i) {
      out += (i == 0 ? "" : i == p ? ";" : ",") + c.object_name(t[i]);
    }
    if (p == t.size() && !t.empty()) {
      out += ";";
    }
    return out + ")";
  }

  void fiber_values(JobRecord& j, std::string const& name, SetFunctorPQ const& F) {
    auto const&       C  = *F.base();
    std::size_t const n  = F.sig().arity();
    std::size_t const no = C.num_objects();
    std::uint64_t     nt = pow_sat(no, n);
    for (std::size_t code = 0; code < nt; ++code) {
      Tuple t = tuple_decode(code, no, n);
      j.values.emplace_back(name + tuple_names(C, t, F.sig().p),
                            std::to_string(F.fiber(t).size()));
    }
  }

  CheckRecord tw11_iso(CatPtr const& c) {
    FactorizationWeight w(c, {1, 1});
    ElementsCat         a = tw_pq(w);
    ElementsCat         b = twisted_arrow(c);
    Functor             f = tw11_to_classical(w, a, b);
    CheckRecord         r{"tw11-iso", true,
                  {a.total->num_objects(), b.total->num_objects(),
                   a.total->num_morphisms(), b.total->num_morphisms()},
                  check_functor(f)};
    bool bij = is_injective_on_objects(f) && is_injective_on_morphisms(f)
               && a.total->num_objects() == b.total->num_objects()
               && a.total->num_morphisms() == b.total->num_morphisms();
    if (!bij) {
      r.failures.push_back("comparison functor is not bijective");
    }
    r.ok = r.failures.empty();
    return r;
  }

  // Records an error raised by one check on the job and lets the rest run.
  template <class Fn>
  void attempt(JobRecord& j, Fn&& fn) {
    try {
      fn();
    } catch (Error const& e) {
      if (!j.error) {
        j.error         = e.kind();
        j.error_message = e.what();
      } else {
        j.error_message += "; " + std::string(e.what());
      }
    }
  }

  // Uses the first pair (A,B) for which the least families exist.
  CheckRecord tw_embedding_check(CatPtr const& c) {
    ElementsCat tw = twisted_arrow(c);
    for (std::size_t a = 0; a < c->num_objects(); ++a) {
      for (std::size_t b = 0; b < c->num_objects(); ++b) {
        ElementsCat twj = tw_j(c, a, b);
        std::optional<Functor> e;
        try {
          e = tw_embedding(tw, twj, c, a, b);
        } catch (Error const& err) {
          if (err.kind() != ErrorKind::NoFactorization) {
            throw;
          }
          continue;
        }
        CheckRecord r{"tw-j-embedding " + c->object_name(a) + "," + c->object_name(b),
                      true, {tw.total->num_objects(), twj.total->num_objects()},
                      check_functor(*e)};
        if (!is_injective_on_objects(*e) || !is_injective_on_morphisms(*e)) {
          r.failures.push_back("embedding is not injective");
        }
        r.ok = r.failures.empty();
        return r;
      }
    }
    return {"tw-j-embedding none", true, {}, {}};
  }

  void pair_checks(JobRecord& j, std::string const& fn, SetFunctorPQ const& F,
                   std::string const& gn, SetFunctorPQ const& G) {
    attempt(j, [&] {
      auto d = dinat_as_end(F, G);
      j.checks.push_back({"dinat-as-end " + fn + " " + gn, d.ok,
                          {d.dinat_count, d.end_count, d.pt_dinat_count, d.weight_nat},
                          d.failures});
    });
    attempt(j, [&] {
      j.checks.push_back(from("factorization " + fn + " " + gn, factorization_check(F, G)));
    });
  }

  void kusarigama_checks(JobRecord& j, std::string const& suffix, SetFunctorPQ const& F) {
    attempt(j, [&] {
      j.checks.push_back(from("pk3" + suffix, check_pk3(F, FinSet::range(2))));
    });
    attempt(j, [&] { j.checks.push_back(from("pk4" + suffix, check_pk4(F))); });
    attempt(j, [&] { j.checks.push_back(from("pk5" + suffix, check_pk5(F))); });
  }

  void functor_checks(JobRecord& j, std::string const& name, SetFunctorPQ const& F,
                      std::vector<EndMethod> const& methods) {
    attempt(j, [&] { end_job(j, name, F, methods, false); });
    attempt(j, [&] { coend_job(j, name, F, methods, false); });
    attempt(j, [&] {
      j.checks.push_back(
          from("universal end " + name, verify_universal_property(end_pq(F), F)));
    });
    attempt(j, [&] {
      j.checks.push_back(
          from("universal coend " + name, verify_universal_property(coend_pq(F), F)));
    });
    attempt(j, [&] {
      auto pe = check_pe_laws(F);
      j.checks.push_back({"pe-laws " + name, pe.pe1 && pe.pe7 && pe.pe8,
                          {pe.pe1, pe.pe7, pe.pe8}, pe.failures});
    });
    attempt(j, [&] {
      auto w = pt_dinat_vs_weight(F, hom_pi_is_weight(F.sig()));
      j.checks.push_back(
          {"pt-dinat-vs-weight " + name, w.ok, {w.dinat, w.nat}, w.failures});
    });
    kusarigama_checks(j, " " + name, F);
  }

  std::string category_name(Model const& m, CatPtr const& c) {
    for (auto const& n : m.category_order) {
      if (m.categories.at(n) == c) {
        return n;
      }
    }
    return c->name();
  }

  void category_checks(JobRecord& j, std::string const& cn, CatPtr const& c) {
    attempt(j, [&] {
      j.checks.push_back(from("j-pt-hom-pi (1,1) " + cn, check_j_pt_hom_pi(c, {1, 1})));
    });
    attempt(j, [&] {
      j.checks.push_back(from("j-pt-hom-pi (2,1) " + cn, check_j_pt_hom_pi(c, {2, 1})));
    });
    attempt(j, [&] { j.checks.push_back(from("sigma-21 " + cn, check_sigma_21(c))); });
    attempt(j, [&] {
      auto tw = tw11_iso(c);
      tw.name += " " + cn;
      j.checks.push_back(tw);
    });
    bool lattice = true;
    try {
      as_lattice(c);
    } catch (Error const& e) {
      if (e.kind() != ErrorKind::NotALattice) {
        throw;
      }
      lattice = false;
    }
    if (lattice) {
      attempt(j, [&] {
        j.checks.push_back(from("constant-kusarigama (1,1) " + cn,
                                check_constant_kusarigama(c, {1, 1}, FinSet::range(2))));
      });
      attempt(j, [&] {
        j.checks.push_back(from("identity-kusarigama (1,1) " + cn,
                                check_identity_kusarigama(c, {1, 1})));
      });
      attempt(j, [&] {
        j.checks.push_back(from("identity-kusarigama (2,1) " + cn,
                                check_identity_kusarigama(c, {2, 1})));
      });
    }
  }

  void check_all(JobRecord& j, Model const& m, RunFlags const& flags) {
    for (auto const& cn : m.category_order) {
      if (m.fubini.count(cn) == 0) {
        category_checks(j, cn, m.categories.at(cn));
      }
    }
    for (auto const& fn : m.functor_order) {
      SetFunctorPQ const& F  = m.functors.at(fn);
      std::string const   cn = category_name(m, F.base());
      if (m.fubini.count(cn) != 0) {
        auto const& s = m.fubini.at(cn);
        if (F.sig() == VarianceSig{0, 1}) {
          attempt(j, [&] {
            auto r = fubini_check(s.a, s.sa, s.b, s.sb, F.functor());
            j.checks.push_back({"fubini " + fn, r.ok,
                                {r.joint_end, r.a_outer_end, r.b_outer_end,
                                 r.joint_coend, r.a_outer_coend, r.b_outer_coend},
                                r.failures});
          });
        }
        continue;
      }
      functor_checks(j, fn, F, flags.methods);
    }
    for (auto const& fn : m.functor_order) {
      for (auto const& gn : m.functor_order) {
        auto const& F = m.functors.at(fn);
        auto const& G = m.functors.at(gn);
        if (F.base() == G.base() && G.sig() == F.sig().swapped()
            && m.fubini.count(category_name(m, F.base())) == 0) {
          pair_checks(j, fn, F, gn, G);
        }
      }
    }
    for (auto const& mn : m.monoidal_order) {
      auto const& M = m.monoidals.at(mn);
      for (auto const& fn : m.functor_order) {
        auto const& F = m.functors.at(fn);
        if (F.sig() == VarianceSig{1, 0} && F.base()->same_tables(*M.base)) {
          attempt(j, [&] {
            j.checks.push_back(
                from("day-coyoneda " + mn + " " + fn, day_coyoneda_check(M, F)));
          });
        }
      }
    }
    // One seeded instance per small category.
    Rng     rng(flags.seed);
    Profile prof;
    for (auto const& cn : m.category_order) {
      CatPtr const& c = m.categories.at(cn);
      if (m.fubini.count(cn) != 0 || c->num_objects() > prof.max_objects
          || c->num_morphisms() > prof.max_morphisms) {
        continue;
      }
      attempt(j, [&] {
        VarianceSig  sig  = random_sig(rng, prof);
        SetFunctorPQ F    = random_functor(rng, c, sig, prof);
        std::string  name = "seeded" + sig_name(sig) + "@" + cn;
        fiber_values(j, name, F);
        end_job(j, name, F, flags.methods, false);
        coend_job(j, name, F, flags.methods, false);
        j.checks.push_back(
            from("universal end " + name, verify_universal_property(end_pq(F), F)));
        j.checks.push_back(
            from("universal coend " + name, verify_universal_property(coend_pq(F), F)));
      });
    }
  }

  void run_job(JobRecord& j, Model const& m, RunFlags const& flags) {
    auto fun = [&](std::string const& n) -> SetFunctorPQ const& {
      return m.functors.at(n);
    };
    if (j.kind == "end") {
      end_job(j, j.args[0], fun(j.args[0]), flags.methods, true);
    } else if (j.kind == "coend") {
      coend_job(j, j.args[0], fun(j.args[0]), flags.methods, true);
    } else if (j.kind == "dinat") {
      auto const& F = fun(j.args[0]);
      auto const& G = fun(j.args[1]);
      auto        d = dinat_as_end(F, G);
      j.values.emplace_back("dinat", std::to_string(d.dinat_count));
      j.values.emplace_back("end", std::to_string(d.end_count));
      j.checks.push_back({"dinat-as-end", d.ok,
                          {d.dinat_count, d.end_count, d.pt_dinat_count, d.weight_nat},
                          d.failures});
    } else if (j.kind == "kusarigama") {
      auto const& F = fun(j.args[0]);
      auto        J = cokusarigama(F);
      auto        K = kusarigama(F);
      fiber_values(j, "J(" + j.args[0] + ")", J.functor());
      fiber_values(j, "Gamma(" + j.args[0] + ")", K.functor());
      kusarigama_checks(j, "", F);
      if (j.args.size() == 2) {
        attempt(j, [&] {
          j.checks.push_back(from("factorization", factorization_check(F, fun(j.args[1]))));
        });
      }
    } else if (j.kind == "fubini") {
      auto const& D  = fun(j.args[0]);
      auto const& s  = m.fubini.at(category_name(m, D.base()));
      auto        r  = fubini_check(s.a, s.sa, s.b, s.sb, D.functor());
      j.values       = {{"joint end", std::to_string(r.joint_end)},
                        {"a-outer end", std::to_string(r.a_outer_end)},
                        {"b-outer end", std::to_string(r.b_outer_end)},
                        {"joint coend", std::to_string(r.joint_coend)},
                        {"a-outer coend", std::to_string(r.a_outer_coend)},
                        {"b-outer coend", std::to_string(r.b_outer_coend)}};
      j.checks.push_back({"fubini", r.ok,
                          {r.joint_end, r.a_outer_end, r.b_outer_end, r.joint_coend,
                           r.a_outer_coend, r.b_outer_coend},
                          r.failures});
    } else if (j.kind == "day") {
      auto const&               M = m.monoidals.at(j.args[0]);
      std::vector<SetFunctorPQ> Fs;
      for (std::size_t k = 1; k < j.args.size(); ++k) {
        Fs.push_back(fun(j.args[k]));
      }
      SetFunctorPQ D = day_convolution(M, Fs);
      fiber_values(j, "day", D);
      j.checks.push_back({"functorial", true, {}, check_functor_pq(D)});
      j.checks.back().ok = j.checks.back().failures.empty();
      if (Fs.size() == 1) {
        j.checks.push_back(from("co-yoneda", day_coyoneda_check(M, Fs[0])));
      }
      if (Fs.size() == 2) {
        fiber_values(j, "classical", day_classical(M, Fs[0], Fs[1]));
      }
    } else if (j.kind == "twisted") {
      CatPtr const& c   = m.categories.at(j.args[0]);
      VarianceSig   sig{std::stoul(j.args[1]), std::stoul(j.args[2])};
      ElementsCat   tw  = tw_pq(c, sig);
      j.values.emplace_back("objects", std::to_string(tw.total->num_objects()));
      j.values.emplace_back("morphisms", std::to_string(tw.total->num_morphisms()));
      Functor s = sigma_pq(twisted_arrow(c), c, sig);
      j.checks.push_back({"sigma functor", true, {}, check_functor(s)});
      j.checks.back().ok = j.checks.back().failures.empty();
      j.checks.push_back({"projection functor", true, {}, check_functor(tw.projection)});
      j.checks.back().ok = j.checks.back().failures.empty();
      if (sig == VarianceSig{1, 1}) {
        j.checks.push_back(tw11_iso(c));
        j.checks.push_back(tw_embedding_check(c));
      }
      if (sig.p >= 1 && sig.q >= 1 && std::min(sig.p, sig.q) == 1) {
        j.checks.push_back(from("j-pt-hom-pi", check_j_pt_hom_pi(c, sig)));
      }
    } else if (j.kind == "weighted") {
      auto const& W = fun(j.args[0]);
      auto const& D = fun(j.args[1]);
      j.carriers.push_back([&] {
        auto e = weighted_end(W, D);
        return carrier_of("weighted end", e.carrier.carrier, e.carrier.legs);
      }());
      j.carriers.push_back([&] {
        auto e = weighted_coend(W, D);
        return carrier_of("weighted coend", e.carrier.carrier, e.carrier.legs);
      }());
      j.checks.push_back(from("weighted-end-vs-dinat", weighted_end_vs_dinat(W, D)));
      j.checks.push_back(from("weighted-coend-vs-dinat", weighted_coend_vs_dinat(W, D)));
    } else if (j.kind == "check-all") {
      check_all(j, m, flags);
    }
  }

}  // namespace

Report run(CatSpec const& spec, RunFlags const& flags) {
  Model m = resolve(spec, ResolveOptions{flags.check_assoc});
  return run(m, spec, flags);
}

Report run(Model const& model, CatSpec const& spec, RunFlags const& flags) {
  Report r;
  r.seed = flags.seed;
  for (auto m : flags.methods) {
    r.methods.push_back(to_string(m));
  }
  for (std::size_t k = 0; k < spec.jobs.size(); ++k) {
    JobRecord j;
    j.index = k + 1;
    j.kind  = spec.jobs[k].kind;
    j.args  = spec.jobs[k].args;
    try {
      run_job(j, model, flags);
    } catch (Error const& e) {
      j.error         = e.kind();
      j.error_message = e.what();
    }
    r.jobs.push_back(std::move(j));
  }
  return r;
}

namespace {

  std::string numbers(std::vector<std::size_t> const& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      out += (i == 0 ? "" : " ") + std::to_string(xs[i]);
    }
    return out;
  }

}  // namespace

std::string render_text(Report const& r) {
  std::ostringstream out;
  std::size_t        checks = 0, failed = 0, errors = 0;
  out << "report seed=" << r.seed << " methods=";
  for (std::size_t i = 0; i < r.methods.size(); ++i) {
    out << (i == 0 ? "" : ",") << r.methods[i];
  }
  out << "\n";
  for (auto const& j : r.jobs) {
    out << "job " << j.index << " " << j.kind;
    for (auto const& a : j.args) {
      out << " " << a;
    }
    out << "\n";
    for (auto const& c : j.carriers) {
      out << "  carrier " << c.name << " size " << c.elements.size() << "\n";
      for (std::size_t i = 0; i < c.elements.size(); ++i) {
        out << "    " << i << " " << c.elements[i] << "\n";
      }
      for (std::size_t i = 0; i < c.legs.size(); ++i) {
        out << "    leg " << i << ": " << numbers(c.legs[i]) << "\n";
      }
    }
    for (auto const& [k, v] : j.values) {
      out << "  value " << k << " = " << v << "\n";
    }
    for (auto const& c : j.checks) {
      ++checks;
      failed += c.ok ? 0 : 1;
      out << "  check " << c.name << " " << (c.ok ? "ok" : "FAIL");
      if (!c.counts.empty()) {
        out << " [" << numbers(c.counts) << "]";
      }
      out << "\n";
      for (auto const& f : c.failures) {
        out << "    - " << f << "\n";
      }
    }
    if (j.error) {
      ++errors;
      out << "  error " << to_string(*j.error) << ": " << j.error_message << "\n";
    }
  }
  out << "summary jobs=" << r.jobs.size() << " checks=" << checks
      << " failed=" << failed << " errors=" << errors << "\n";
  return out.str();
}

std::string render_json(Report const& r) {
  using nlohmann::json;
  json doc;
  doc["seed"]    = r.seed;
  doc["methods"] = r.methods;
  json        jobs = json::array();
  std::size_t checks = 0, failed = 0, errors = 0;
  for (auto const& j : r.jobs) {
    json jj;
    jj["index"] = j.index;
    jj["kind"]  = j.kind;
    jj["args"]  = j.args;
    json cs     = json::array();
    for (auto const& c : j.carriers) {
      cs.push_back({{"name", c.name}, {"elements", c.elements}, {"legs", c.legs}});
    }
    jj["carriers"] = cs;
    json vs        = json::array();
    for (auto const& [k, v] : j.values) {
      vs.push_back({{"name", k}, {"value", v}});
    }
    jj["values"] = vs;
    json ks      = json::array();
    for (auto const& c : j.checks) {
      ++checks;
      failed += c.ok ? 0 : 1;
      ks.push_back({{"name", c.name},
                    {"ok", c.ok},
                    {"counts", c.counts},
                    {"failures", c.failures}});
    }
    jj["checks"] = ks;
    if (j.error) {
      ++errors;
      jj["error"] = {{"kind", to_string(*j.error)}, {"message", j.error_message}};
    } else {
      jj["error"] = nullptr;
    }
    jobs.push_back(jj);
  }
  doc["jobs"]    = jobs;
  doc["summary"] = {{"jobs", r.jobs.size()},
                    {"checks", checks},
                    {"failed", failed},
                    {"errors", errors}};
  return doc.dump(2) + "\n";
}

}  // namespace hace
