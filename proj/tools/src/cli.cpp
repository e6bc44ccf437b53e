#include "cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <variant>

#include <CLI11.hpp>

#include "battery.hpp"
#include "extmorph/algebra.hpp"
#include "extmorph/category_json.hpp"
#include "extmorph/relcalc.hpp"
#include "report.hpp"

namespace extmorph::cli {

using nlohmann::json;

namespace {

// Bad input: reported on stderr, exit code 2.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string input;
  std::string output;
  std::string report;
  unsigned jobs = 1;
  std::uint64_t seed = 7;
  bool strict = false;
  int max_relation_size = 9;
};

void add_common(CLI::App& cmd, Common& c, bool needs_input) {
  auto* in = cmd.add_option("input,--input", c.input, "Category JSON file");
  if (needs_input) in->required();
  cmd.add_option("--output", c.output, "Write human-readable output here instead of stdout");
  cmd.add_option("--report", c.report, "Write the JSON report here");
  cmd.add_option("--jobs", c.jobs, "Worker threads")->check(CLI::Range(1U, 256U));
  cmd.add_option("--seed", c.seed, "Seed for sampled checks");
  cmd.add_flag("--strict", c.strict, "Treat inapplicable checks as failures");
  cmd.add_option("--max-relation-size", c.max_relation_size, "Largest X x Y enumerated by relation suites")
      ->check(CLI::Range(1, 64));
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct Loaded {
  FinCategory category;
  std::string digest;
};

Loaded load_category(const std::string& path, std::ostream& err) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
  CategoryDescription d;
  try {
    d = description_from_json(doc);
  } catch (const std::invalid_argument& e) {
    throw InputError(path + ": " + e.what());
  }
  auto v = validate_category(d);
  if (auto* errors = std::get_if<std::vector<ValidationError>>(&v)) {
    for (const auto& e : *errors) err << to_string(e.kind) << ": " << e.message << '\n';
    throw InputError(path + ": " + std::to_string(errors->size()) + " validation errors");
  }
  return {std::get<FinCategory>(std::move(v)), sha256_hex(doc.dump())};
}

MorphismId morphism_or_throw(const FinCategory& c, const std::string& id) {
  auto m = c.find_morphism(id);
  if (!m) throw InputError("unknown morphism id: " + id);
  return *m;
}

ObjectId object_or_throw(const FinCategory& c, const std::string& id) {
  auto o = c.find_object(id);
  if (!o) throw InputError("unknown object id: " + id);
  return *o;
}

template <class Fn>
ReportEntry timed(std::string id, Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckStatus s = fn();
  return {std::move(id), std::move(s),
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count()};
}

// Splits morphism-level checks across workers, each with its own memo.
std::vector<ReportEntry> per_morphism(const FinCategory& c, unsigned jobs,
                                      const std::function<std::vector<ReportEntry>(Analysis&, MorphismId)>& fn) {
  const std::size_t n = c.morphism_count();
  const unsigned workers = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  std::vector<std::vector<ReportEntry>> parts(workers);
  auto work = [&](unsigned w) {
    Analysis a(c);
    for (std::size_t i = w; i < n; i += workers) {
      auto es = fn(a, MorphismId{static_cast<std::uint32_t>(i)});
      for (auto& e : es) parts[w].push_back(std::move(e));
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work, w);
    work(0);
  }
  std::vector<ReportEntry> out;
  for (auto& p : parts)
    for (auto& e : p) out.push_back(std::move(e));
  return out;
}

int finish(const Report& r, const Common& c, std::ostream& out) {
  if (!c.output.empty()) {
    std::ofstream f(c.output);
    if (!f) throw InputError("cannot write " + c.output);
    r.print(f);
  } else {
    r.print(out);
  }
  if (!c.report.empty()) {
    std::ofstream f(c.report);
    if (!f) throw InputError("cannot write " + c.report);
    f << r.to_json().dump(2) << '\n';
  }
  return r.exit_code(c.strict);
}

json common_options(const Common& c) {
  return {{"seed", c.seed}, {"max_relation_size", c.max_relation_size}};
}

// --------------------------------------------------------------------- gen

struct GenArgs {
  std::string variety = "set";
  bool connected = false;
  int max_carrier = 3;
  std::optional<int> generators_max;
  bool no_products = false;
  bool no_subalgebras = false;
  bool no_quotients = false;
};

void write_category(const BuiltCategory& b, const Common& c, std::ostream& out, std::ostream& err) {
  const std::string doc = to_json(b.category).dump(1) + "\n";
  std::ostream* counts = &out;
  if (c.output.empty() || c.output == "-") {
    out << doc;
    counts = &err;
  } else {
    std::ofstream f(c.output);
    if (!f) throw InputError("cannot write " + c.output);
    f << doc;
  }
  *counts << b.category.object_count() << " objects, " << b.category.morphism_count() << " morphisms\n";
  for (const auto& o : b.overflow) err << "dropped by budget: " << o << '\n';
}

int cmd_gen(const GenArgs& g, const Common& c, std::ostream& out, std::ostream& err) {
  if (g.variety == "chain") {
    // the chain 0 < 1 < ... as a thin category
    write_category(thin_category(chain(AlgebraKind::poset, g.max_carrier)), c, out, err);
    return 0;
  }
  auto kind = parse_algebra_kind(g.variety);
  if (!kind) throw InputError("unknown variety: " + g.variety);
  if (g.connected) {
    if (*kind != AlgebraKind::poset && *kind != AlgebraKind::connected_poset)
      throw InputError("--connected applies to posets only");
    kind = AlgebraKind::connected_poset;
  }
  BuilderConfig cfg{*kind, g.max_carrier, !g.no_products, !g.no_subalgebras, !g.no_quotients, g.generators_max};
  auto b = [&] {
    try {
      return build_category(cfg);
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
  }();
  write_category(b, c, out, err);
  return 0;
}

// ---------------------------------------------------------------- validate

int cmd_validate(const Common& c, std::ostream& out, std::ostream& err) {
  std::ostringstream errors;
  Report r("validate", common_options(c), "");
  try {
    Loaded l = load_category(c.input, errors);
    r = Report("validate", common_options(c), l.digest);
    r.add(ReportEntry{"validate",
                      {Status::pass, json(),
                       {{"objects", l.category.object_count()}, {"morphisms", l.category.morphism_count()}}},
                      0.0});
  } catch (const InputError& e) {
    err << errors.str();
    json list = json::array();
    std::istringstream lines(errors.str());
    for (std::string line; std::getline(lines, line);) list.push_back(line);
    r.add(ReportEntry{"validate", CheckStatus::fail({{"error", e.what()}, {"errors", list}}), 0.0});
    finish(r, c, out);
    return 2;
  }
  return finish(r, c, out);
}

// ------------------------------------------------------------------- check

struct CheckArgs {
  std::string morphism;
  std::string object;
  std::string mode = "extensive";
  std::string morphism_class;
  std::optional<int> srp;
};

int cmd_check(const CheckArgs& k, const Common& c, std::ostream& out, std::ostream& err) {
  const bool co = k.mode == "coextensive";
  Loaded l = load_category(c.input, err);
  const FinCategory& cat = l.category;
  json opts = common_options(c);
  opts["mode"] = k.mode;
  if (!k.morphism.empty()) opts["morphism"] = k.morphism;
  if (!k.object.empty()) opts["object"] = k.object;
  if (!k.morphism_class.empty()) opts["class"] = k.morphism_class;
  if (k.srp) opts["srp"] = *k.srp;
  Report r("check", opts, l.digest);

  const std::string tag = co ? "coextensive" : "extensive";
  auto morphism_entries = [&](Analysis& a, MorphismId f) {
    const std::string& n = cat.morphism_name(f);
    std::vector<ReportEntry> es;
    es.push_back(timed(tag + ":" + n, [&] { return co ? is_coextensive_morphism(a, f) : is_extensive_morphism(a, f); }));
    es.push_back(timed(std::string(co ? "C1:" : "E1:") + n, [&] { return co ? check_c1(a, f) : check_e1(a, f); }));
    es.push_back(timed(std::string(co ? "C2:" : "E2:") + n, [&] { return co ? check_c2(a, f) : check_e2(a, f); }));
    return es;
  };

  std::optional<MorphismClass> restrict_to;
  if (!k.morphism_class.empty()) {
    restrict_to = parse_morphism_class(k.morphism_class);
    if (!restrict_to) throw InputError("unknown morphism class: " + k.morphism_class);
  }

  if (!k.morphism.empty()) {
    const MorphismId f = morphism_or_throw(cat, k.morphism);
    Analysis a(cat);
    r.add(morphism_entries(a, f));
  }
  if (!k.object.empty()) {
    const ObjectId x = object_or_throw(cat, k.object);
    Analysis a(cat);
    r.add(timed(tag + ":" + cat.morphism_name(cat.identity(x)), [&] {
      return co ? is_coextensive_morphism(a, cat.identity(x)) : is_extensive_morphism(a, cat.identity(x));
    }));
    if (k.srp) {
      if (*k.srp < 2) throw InputError("--srp needs k >= 2");
      r.add(timed("srp" + std::to_string(*k.srp) + ":" + k.object, [&] { return has_finite_srp(a, x, *k.srp); }));
    }
  }
  if (k.morphism.empty() && k.object.empty()) {
    if (restrict_to) {
      Analysis a(cat);
      for (MorphismId f : cat.morphisms())
        if (a.in_class(f, *restrict_to)) r.add(morphism_entries(a, f));
    } else {
      r.add(per_morphism(cat, c.jobs, morphism_entries));
    }
    Analysis a(cat);
    const ReportMode mode = co ? ReportMode::coextensive : ReportMode::extensive;
    r.add(timed("category:" + tag, [&] { return category_report(a, mode, restrict_to).verdict; }));
    if (!restrict_to) {
      r.add(timed("category:" + tag + ":reduced", [&] { return category_report(a, mode).agreement; }));
      if (co)
        r.add(timed("category:codisjoint", [&] { return product_codisjointness(a); }));
      else {
        r.add(timed("category:disjoint", [&] { return coproduct_disjointness(a); }));
        r.add(timed("category:boolean", [&] { return is_boolean_category(a); }));
      }
    }
    if (k.srp) {
      if (*k.srp < 2) throw InputError("--srp needs k >= 2");
      for (ObjectId x : cat.objects())
        r.add(timed("srp" + std::to_string(*k.srp) + ":" + cat.object_name(x), [&] { return has_finite_srp(a, x, *k.srp); }));
    }
  }
  return finish(r, c, out);
}

// --------------------------------------------------------------------- srp

int cmd_srp(const std::string& object, int arity, const Common& c, std::ostream& out, std::ostream& err) {
  if (arity < 2) throw InputError("--k must be at least 2");
  Loaded l = load_category(c.input, err);
  const FinCategory& cat = l.category;
  json opts = common_options(c);
  opts["k"] = arity;
  if (!object.empty()) opts["object"] = object;
  Report r("srp", opts, l.digest);
  Analysis a(cat);
  std::vector<ObjectId> targets;
  if (!object.empty())
    targets.push_back(object_or_throw(cat, object));
  else
    for (ObjectId x : cat.objects()) targets.push_back(x);
  for (ObjectId x : targets)
    r.add(timed("srp" + std::to_string(arity) + ":" + cat.object_name(x), [&] {
      return arity == 2 ? has_binary_srp(a, x) : has_finite_srp(a, x, arity);
    }));
  return finish(r, c, out);
}

// ----------------------------------------------------------------- relcalc

int cmd_relcalc(const Common& c, std::ostream& out, std::ostream& err) {
  Loaded l = load_category(c.input, err);
  Report r("relcalc", common_options(c), l.digest);
  IdentityOptions opt;
  opt.seed = c.seed;
  opt.max_relation_size = c.max_relation_size;
  auto add_suite = [&](const IdentitySuite& s, const std::string& prefix) {
    r.add(ReportEntry{prefix + "regularity", s.regularity, 0.0});
    for (const auto& e : s.identities) r.add(ReportEntry{prefix + e.id, e.status, 0.0});
  };
  Analysis a(l.category);
  RelationCalculus rc(a);
  add_suite(identity_suite(rc, opt), "");
  r.add(timed("thm-barr-exact", [&] { return barr_exact_check(rc); }));

  // Categories generated by the set builder also get the concrete model.
  const json& builder = l.category.metadata().contains("builder") ? l.category.metadata()["builder"] : json();
  if (builder.is_object() && builder.value("variety", "") == "set") {
    BuilderConfig cfg{AlgebraKind::set, builder.value("max_carrier", 3), builder.value("products", true),
                      builder.value("subalgebras", true), builder.value("quotients", true),
                      builder.value("generators_max", builder.value("max_carrier", 3))};
    BuiltCategory b = build_category(cfg);
    if (b.category == l.category) {
      Analysis sa(b.category);
      add_suite(identity_suite(b, sa, opt), "concrete:");
    } else {
      err << "builder metadata does not reproduce the category; concrete model skipped\n";
    }
  }
  return finish(r, c, out);
}

// ------------------------------------------------------------ verify-paper

int cmd_verify(const std::string& suite, std::size_t sample_bound, const Common& c, std::ostream& out) {
  std::vector<std::string> selection;
  try {
    selection = parse_suite(suite);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  json opts = common_options(c);
  opts["suite"] = suite;
  opts["sample_bound"] = sample_bound;
  json request{{"selection", selection}, {"options", opts}};
  Report r("verify-paper", opts, sha256_hex(request.dump()));
  BatteryOptions b;
  b.seed = c.seed;
  b.max_relation_size = c.max_relation_size;
  b.sample_bound = sample_bound;
  b.jobs = c.jobs;
  r.add(run_battery(selection, b));
  return finish(r, c, out);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Extensive and coextensive morphisms in finite categories"};
  app.require_subcommand(1);
  app.set_version_flag("--version", EXTMORPH_VERSION);

  Common common;

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a category of finite structures");
  g->add_option("--variety", gen.variety, "set, pointed-set, poset, connected-poset, semilattice, lattice, monoid, chain");
  g->add_flag("--connected", gen.connected, "Connected posets only");
  g->add_option("--max-carrier", gen.max_carrier, "Largest carrier")->check(CLI::PositiveNumber);
  g->add_option("--generators-max", gen.generators_max, "Largest seed structure before closure");
  g->add_flag("--no-products", gen.no_products);
  g->add_flag("--no-subalgebras", gen.no_subalgebras);
  g->add_flag("--no-quotients", gen.no_quotients);
  add_common(*g, common, false);

  auto* v = app.add_subcommand("validate", "Validate a category file");
  add_common(*v, common, true);

  CheckArgs chk;
  auto* ch = app.add_subcommand("check", "Check morphisms, objects or a whole category");
  ch->add_option("--morphism", chk.morphism, "Morphism id");
  ch->add_option("--object", chk.object, "Object id");
  ch->add_option("--mode", chk.mode, "extensive or coextensive")->check(CLI::IsMember({"extensive", "coextensive"}));
  ch->add_option("--class", chk.morphism_class, "Restrict the category verdict to a morphism class");
  ch->add_option("--srp", chk.srp, "Strict refinement arity");
  add_common(*ch, common, true);

  std::string srp_object;
  int srp_k = 2;
  auto* s = app.add_subcommand("srp", "Strict refinement property of objects");
  s->add_option("--object", srp_object, "Object id (default: every object)");
  s->add_option("--k", srp_k, "Number of factors");
  add_common(*s, common, true);

  auto* rel = app.add_subcommand("relcalc", "Relation-calculus identities and the Barr-exact check");
  add_common(*rel, common, true);

  std::string suite = "all";
  std::size_t sample_bound = 2000;
  auto* vp = app.add_subcommand("verify-paper", "Run the built-in statement battery");
  vp->add_option("--suite", suite, "all, 2, 3, or comma-separated ids");
  vp->add_option("--sample-bound", sample_bound, "Instances per sampled statement");
  add_common(*vp, common, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*g) return cmd_gen(gen, common, out, err);
    if (*v) return cmd_validate(common, out, err);
    if (*ch) return cmd_check(chk, common, out, err);
    if (*s) return cmd_srp(srp_object, srp_k, common, out, err);
    if (*rel) return cmd_relcalc(common, out, err);
    if (*vp) return cmd_verify(suite, sample_bound, common, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace extmorph::cli
