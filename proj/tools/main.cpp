#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "oscal/extraction.hpp"
#include "oscal/func.hpp"
#include "oscal/io.hpp"
#include "oscal/oracle.hpp"
#include "oscal/seqlab.hpp"
#include "oscal/transfinite.hpp"

namespace {

using Json = nlohmann::ordered_json;
using namespace oscal;

constexpr int kExitFalse = 1;
constexpr int kExitInput = 2;

struct Outcome {
  Json doc;
  Verdict verdict = Verdict::Holds;
};

Json embed(const Document& d) { return Json::parse(serialize(d)); }

Json values_of(const QFunction& f) { return embed(f)["values"]; }

Json opt(const std::optional<Rational>& q) { return q ? Json(to_string(*q)) : Json(nullptr); }

std::size_t env_cap() {
  const char* v = std::getenv("OSCAL_CAP");
  if (!v) return kDefaultCap;
  std::string s(v);
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos || s.size() > 9) {
    throw InputError("OSCAL_CAP must be a natural number");
  }
  return std::stoul(s);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw InputError("cannot write " + path);
}

QFunction load_function(const std::string& file) { return parse_qfunction(read_source(file)); }

PolyBasis load_basis(const std::string& file) {
  BasisDocument b = parse_basis(read_source(file));
  return PolyBasis(b.space, b.vectors);
}

Json report_json(const CheckReport& r) {
  Json items = Json::array();
  for (const CheckItem& it : r.items) {
    Json o = Json::object();
    o["condition"] = it.condition;
    o["detail"] = it.detail;
    o["verdict"] = to_string(it.verdict);
    items.push_back(std::move(o));
  }
  return items;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact oscillation calculus on countable compact spaces"};
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("--quiet", quiet, "Print only the verdict");

  std::function<Outcome()> action;
  std::string file, file2, out_path, kind_opt, eta_text;
  std::optional<std::size_t> cap_opt, alpha_opt, unroll_opt;
  bool stabilize = false, positive = false, oracle = false, difference = false, fallback = false;
  std::size_t j0 = 0, x_node = 0, run_alpha = 0;
  std::uint64_t copy_cap = kDefaultCopyCap;
  std::vector<std::size_t> zeros;
  std::vector<std::uint64_t> m_list;

  auto cap = [&] { return cap_opt ? *cap_opt : env_cap(); };

  // space
  auto* space = app.add_subcommand("space", "Space documents")->require_subcommand(1);
  auto* validate_cmd = space->add_subcommand("validate", "Check a space document");
  validate_cmd->add_option("FILE", file, "Space document, - for stdin")->required();
  validate_cmd->callback([&] {
    action = [&] {
      SpacePtr s = parse_space(read_source(file));
      Outcome o;
      o.doc["valid"] = true;
      o.doc["nodes"] = s->size();
      o.doc["max_rank"] = s->max_rank();
      return o;
    };
  });

  // fn
  auto* fn = app.add_subcommand("fn", "Functions on a space")->require_subcommand(1);
  auto* envelope = fn->add_subcommand("envelope", "Upper or lower semicontinuous envelope");
  envelope->add_option("FILE", file)->required();
  envelope->add_option("--kind", kind_opt, "upper or lower")->required()->check(CLI::IsMember({"upper", "lower"}));
  envelope->callback([&] {
    action = [&] {
      QFunction f = load_function(file);
      return Outcome{embed(kind_opt == "upper" ? usc_envelope(f) : lsc_envelope(f))};
    };
  });

  auto* osc_cmd = fn->add_subcommand("osc", "Transfinite oscillation stages");
  osc_cmd->add_option("FILE", file)->required();
  auto* alpha_o = osc_cmd->add_option("--alpha", alpha_opt, "Single stage");
  osc_cmd->add_flag("--stabilize", stabilize, "Iterate until two stages agree (default)")->excludes(alpha_o);
  osc_cmd->add_option("--cap", cap_opt, "Iteration cap");
  osc_cmd->add_flag("--positive", positive, "Positive oscillation v instead of osc");
  osc_cmd->callback([&] {
    action = [&] {
      QFunction f = load_function(file);
      OscKind kind = positive ? OscKind::Positive : OscKind::Osc;
      if (alpha_opt) return Outcome{embed(stage(f, kind, *alpha_opt))};
      OscTrace t = iterate(f, kind, cap());
      Outcome o;
      o.doc["kind"] = positive ? "v" : "osc";
      Json stages = Json::array();
      for (const QFunction& s : t.stages) stages.push_back(values_of(s));
      o.doc["stages"] = std::move(stages);
      o.doc["stabilized_at"] = t.stabilized_at ? Json(std::to_string(*t.stabilized_at)) : Json(nullptr);
      o.doc["cap"] = t.cap;
      if (!t.stabilized_at) o.verdict = Verdict::Fails;
      return o;
    };
  });

  auto* index_cmd = fn->add_subcommand("index", "D-index");
  index_cmd->add_option("FILE", file)->required();
  index_cmd->add_option("--cap", cap_opt, "Iteration cap");
  index_cmd->callback([&] {
    action = [&] {
      auto i = d_index(load_function(file), cap());
      Outcome o;
      o.doc["i_D"] = i ? Json(std::to_string(*i)) : Json(nullptr);
      if (!i) {
        o.doc["cap_exceeded"] = true;
        o.verdict = Verdict::Fails;
      }
      return o;
    };
  });

  auto* dnorm_cmd = fn->add_subcommand("dnorm", "D-norm from the oscillation formula");
  dnorm_cmd->add_option("FILE", file)->required();
  dnorm_cmd->add_flag("--oracle", oracle, "Also solve the linear program and compare");
  dnorm_cmd->add_option("--unroll", unroll_opt, "Also solve the program on the space with k copies unrolled");
  dnorm_cmd->add_option("--cap", cap_opt, "Iteration cap");
  dnorm_cmd->callback([&] {
    action = [&] {
      QFunction f = load_function(file);
      std::optional<Rational> formula = d_norm(f, cap());
      Outcome o;
      o.doc["formula"] = opt(formula);
      bool agree = formula.has_value();
      if (oracle) {
        Rational lp = oracle_dnorm(f).optimum;
        o.doc["oracle"] = to_string(lp);
        agree = agree && *formula == lp;
      }
      if (unroll_opt) {
        SymmetryResult sym = symmetry_compare(f, *unroll_opt);
        o.doc["unrolled_oracle"] = to_string(sym.unrolled);
        o.doc["unrolled_nodes"] = sym.unrolled_nodes;
        agree = agree && *formula == sym.unrolled;
      }
      if (oracle || unroll_opt) o.doc["agree"] = agree;
      if (!formula) o.doc["cap_exceeded"] = true;
      if (!agree) o.verdict = Verdict::Fails;
      return o;
    };
  });

  auto* decompose_cmd = fn->add_subcommand("decompose", "Attained difference of semicontinuous functions");
  decompose_cmd->add_option("FILE", file)->required();
  decompose_cmd->add_option("-o", out_path, "Write u and v here");
  decompose_cmd->add_option("--cap", cap_opt, "Iteration cap");
  decompose_cmd->callback([&] {
    action = [&] {
      auto d = decompose(load_function(file), cap());
      Outcome o;
      if (!d) {
        o.doc["cap_exceeded"] = true;
        o.verdict = Verdict::Fails;
        return o;
      }
      o.doc["lambda"] = to_string(d->lambda);
      o.doc["tau"] = std::to_string(d->tau);
      o.doc["nonnegative"] = d->nonnegative;
      o.doc["lower_semicontinuous"] = d->lower_semicontinuous;
      o.doc["difference_exact"] = d->difference_exact;
      o.doc["norm_attained"] = d->norm_attained;
      Json parts = Json::object();
      parts["u"] = embed(d->u);
      parts["v"] = embed(d->v);
      if (out_path.empty()) {
        o.doc["u"] = parts["u"];
        o.doc["v"] = parts["v"];
      } else {
        write_file(out_path, parts.dump(2) + "\n");
      }
      return o;
    };
  });

  // seq
  auto* seq = app.add_subcommand("seq", "Finite-dimensional basis computations")->require_subcommand(1);
  auto* identities = seq->add_subcommand("identities", "Difference-sequence identities and bounds");
  identities->add_option("FILE", file)->required();
  identities->callback([&] {
    action = [&] {
      PolyBasis b = load_basis(file);
      IdentityReport r = check_identities(b);
      SandwichReport s = sandwich_check(b);
      Outcome o;
      o.doc["lambda"] = to_string(r.lambda);
      o.doc["s_norm"] = to_string(r.s_norm);
      o.doc["max_dual_norm"] = to_string(r.max_dual_norm);
      o.doc["max_q_norm"] = to_string(r.max_q_norm);
      o.doc["max_b_norm"] = to_string(r.max_b_norm);
      o.doc["difference_dual"] = r.difference_dual;
      o.doc["q_split"] = r.q_split;
      o.doc["p_recovery"] = r.p_recovery;
      o.doc["biorthogonal_difference"] = r.biorthogonal_difference;
      o.doc["dual_bound"] = r.dual_bound;
      o.doc["projection_bound"] = r.projection_bound;
      o.doc["sandwich_lower"] = s.lower_holds;
      o.doc["sandwich_upper"] = s.upper_holds;
      bool all = r.all() && s.lower_holds && s.upper_holds;
      o.doc["all"] = all;
      if (!all) o.verdict = Verdict::Fails;
      return o;
    };
  });

  auto* bc = seq->add_subcommand("basis-constant", "Sup of the basis projection norms");
  bc->add_option("FILE", file)->required();
  bc->callback([&] {
    action = [&] {
      PolyBasis b = load_basis(file);
      Outcome o;
      Json norms = Json::array();
      for (std::size_t k = 1; k <= b.size(); ++k) norms.push_back(to_string(projection_norm(b, k)));
      o.doc["basis_constant"] = to_string(basis_constant(b));
      o.doc["projection_norms"] = std::move(norms);
      return o;
    };
  });

  for (const char* which : {"wuc", "duc"}) {
    auto* cmd = seq->add_subcommand(which, std::string(which) == "wuc" ? "WUC constant of the vectors"
                                                                      : "WUC constant of the difference vectors");
    cmd->add_option("FILE", file)->required();
    std::string name = which;
    cmd->callback([&, name] {
      action = [&, name] {
        BasisDocument b = parse_basis(read_source(file));
        Outcome o;
        o.doc[name] = to_string(name == "wuc" ? wuc_norm(b.space, b.vectors) : duc_norm(b.space, b.vectors));
        return o;
      };
    });
  }

  auto* eps = seq->add_subcommand("eps-cc", "Largest coefficient reachable at j0 with bounded partial sums");
  eps->add_option("FILE", file)->required();
  eps->add_option("--zeros", zeros, "Positions forced to zero, comma separated")->delimiter(',');
  eps->add_option("--j0", j0, "Position to maximize (1-based)")->required();
  eps->callback([&] {
    action = [&] {
      Outcome o;
      o.doc["eps_cc"] = to_string(eps_cc_value(load_basis(file), zeros, j0));
      return o;
    };
  });

  // extract
  auto* extract = app.add_subcommand("extract", "Witness extraction and checking")->require_subcommand(1);
  auto* run = extract->add_subcommand("run", "Build a witness bundle");
  run->add_option("FILE", file, "Sequence document")->required();
  run->add_option("--alpha", run_alpha, "1 or 2")->required()->check(CLI::IsMember({1, 2}));
  run->add_option("--x", x_node, "Node id")->required();
  run->add_option("--eta", eta_text, "Rational in (0, 1)")->required();
  run->add_option("-o", out_path, "Write the witness here");
  run->add_option("--m", m_list, "m-sequence, comma separated (default 1,2,...)")->delimiter(',');
  run->add_flag("--difference", difference, "Reduce to the difference form");
  run->add_flag("--allow-fallback", fallback, "For alpha 2 with v_1 = v_2, use the alpha 1 construction");
  run->add_option("--copy-cap", copy_cap, "Copy index cap for witness searches");
  run->callback([&] {
    action = [&] {
      FunctionSeq s = parse_sequence(read_source(file));
      Rational eta = parse_rational(eta_text);
      std::vector<std::uint64_t> m = m_list.empty() ? default_m(2 * run_alpha) : m_list;
      RunOptions opts;
      opts.copy_cap = copy_cap;
      opts.allow_fallback = fallback;
      Outcome o;
      WitnessDocument w;
      RunResult chain;
      if (difference) {
        ReductionResult r = difference_run(s, run_alpha, static_cast<NodeId>(x_node), eta, m, opts);
        chain = r.chain;
        w = r.difference;
      } else {
        chain = chain_run(s, run_alpha, static_cast<NodeId>(x_node), eta, m, opts);
        w = chain.bundle;
      }
      Json witness = embed(w);
      if (out_path.empty()) {
        o.doc = std::move(witness);
        return o;
      }
      write_file(out_path, serialize(w));
      o.doc["alpha_used"] = chain.alpha_used;
      o.doc["fell_back"] = chain.fell_back;
      o.doc["k"] = chain.bundle.k;
      o.doc["form"] = difference ? "difference" : "chain";
      o.doc["verdict"] = "holds";
      return o;
    };
  });

  auto* check = extract->add_subcommand("check", "Verify a witness against a sequence");
  check->add_option("SEQFILE", file)->required();
  check->add_option("WITNESSFILE", file2)->required();
  check->callback([&] {
    action = [&] {
      FunctionSeq s = parse_sequence(read_source(file));
      WitnessDocument w = parse_witness(read_source(file2));
      CheckReport r;
      Outcome o;
      if (const auto* b = std::get_if<WitnessBundle>(&w)) {
        o.doc["form"] = "chain";
        r = check_chain(s, *b);
      } else {
        o.doc["form"] = "difference";
        r = check_difference(s, std::get<DifferenceWitness>(w));
      }
      o.verdict = r.overall();
      o.doc["verdict"] = to_string(o.verdict);
      o.doc["failed"] = r.failed();
      o.doc["conditions"] = report_json(r);
      return o;
    };
  });

  // --quiet may follow any subcommand
  std::function<void(CLI::App*)> pass_up = [&](CLI::App* a) {
    for (CLI::App* sub : a->get_subcommands({})) {
      sub->fallthrough();
      pass_up(sub);
    }
  };
  pass_up(&app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    Outcome o = action();
    if (quiet) {
      std::cout << to_string(o.verdict) << "\n";
    } else {
      std::cout << o.doc.dump(2) << "\n";
    }
    return o.verdict == Verdict::Holds ? 0 : kExitFalse;
  } catch (const InputError& e) {
    std::cerr << "oscal: " << e.what() << "\n";
    return kExitInput;
  } catch (const PreconditionError& e) {
    std::cerr << "oscal: precondition: " << e.what() << "\n";
    return kExitInput;
  } catch (const Error& e) {
    // caps, exhausted searches, irrational moduli, failed self-checks
    std::cerr << "oscal: " << e.what() << "\n";
    if (quiet) std::cout << to_string(Verdict::Undecided) << "\n";
    return kExitFalse;
  }
}
