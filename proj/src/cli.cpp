#include "cmtorus/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "cmtorus/cmtypes.hpp"
#include "cmtorus/glattice.hpp"
#include "cmtorus/parallel.hpp"
#include "cmtorus/quadforms.hpp"
#include "cmtorus/reciprocity.hpp"
#include "cmtorus/transfer.hpp"

namespace cmtorus::cli {

using nlohmann::ordered_json;

namespace {

struct Options {
  int g = 0;
  bool primitive = false;
  bool weyl = false;
  unsigned jobs = default_jobs();
  std::string cache_dir;
  std::string transfer_case;
  long long discriminant = 0;
  long long bound = 0;
  long long min_abs = 3;
  long long max_abs = 1000;
  bool demo = false;
};

std::optional<std::filesystem::path> cache_location(const Options& o) {
  if (!o.cache_dir.empty()) return std::filesystem::path(o.cache_dir);
  if (const char* env = std::getenv(kCacheEnv); env != nullptr && *env != '\0')
    return std::filesystem::path(env);
  return std::nullopt;
}

ordered_json header(const std::string& command, ordered_json args) {
  ordered_json h;
  h["command"] = command;
  h["args"] = std::move(args);
  h["version"] = kVersion;
  return h;
}

void emit(std::ostream& out, const ordered_json& j) { out << j.dump() << '\n'; }

int cmd_enumerate(const Options& o, std::ostream& out, std::ostream& err) {
  cmtypes::EnumerationOptions eo;
  eo.require_primitive = o.primitive;
  eo.jobs = o.jobs;
  const auto configs = cmtypes::enumerate_cached(o.g, eo, cache_location(o));
  emit(out, header("enumerate", {{"g", o.g}, {"primitive", o.primitive}}));
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const auto& c = configs[i];
    ordered_json r;
    r["index"] = i;
    r["order"] = c.group.order();
    r["configKey"] = c.key();
    r["generators"] = sgnperm::serialize_generators(c.group.canonical_generators());
    r["primitive"] = c.primitive;
    r["faithfulCore"] = c.faithful_on_core;
    emit(out, r);
  }
  emit(out, {{"summary", {{"configs", configs.size()}}}});
  err << "enumerate g=" << o.g << ": " << configs.size() << " configurations\n";
  return kExitPass;
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
  cmtypes::EnumerationOptions eo;
  eo.require_primitive = true;
  eo.jobs = o.jobs;
  const auto configs = cmtypes::enumerate_cached(o.g, eo, cache_location(o));
  const auto reports = reciprocity::verify_all(configs, o.jobs);

  emit(out, header("verify", {{"g", o.g}, {"weyl", o.weyl}}));
  std::size_t passed = 0;
  std::map<std::string, std::size_t> kinds;
  for (const auto& r : reports) {
    emit(out, r.to_json());
    if (r.passed()) ++passed;
    ++kinds[reciprocity::to_string(r.certificate.kind)];
  }
  bool ok = passed == reports.size();
  ordered_json summary;
  summary["configs"] = reports.size();
  summary["passed"] = passed;
  summary["failed"] = reports.size() - passed;
  summary["certificateKinds"] = kinds;
  summary["signConvention"] = "w(g) = image of 1* - g*";
  if (o.weyl) {
    const auto w = reciprocity::check_weyl_surjectivity(o.g);
    summary["weyl"] = {{"cokernelTrivial", w.cokernel_trivial}, {"witnessesOk", w.witnesses_ok}};
    ok = ok && w.ok();
  }
  summary["pass"] = ok;
  emit(out, {{"summary", summary}});
  err << "verify g=" << o.g << ": " << passed << "/" << reports.size() << " configurations pass";
  for (const auto& [k, n] : kinds) err << ", " << k << " " << n;
  err << (ok ? "" : " (FAILED)") << '\n';
  return ok ? kExitPass : kExitFailure;
}

int cmd_transfer(const Options& o, std::ostream& out, std::ostream& err) {
  const auto chain = o.transfer_case == "gerth" ? transfer::gerth_chain() : transfer::quartic_chain();
  const auto v = transfer::verify_chain(chain);
  emit(out, header("transfer", {{"case", o.transfer_case}}));
  emit(out, transfer::to_json(chain));
  emit(out, {{"summary", {{"steps", chain.steps.size()}, {"pass", v.ok}}}});
  err << "transfer " << o.transfer_case << ": " << (v.ok ? "chain verifies" : "chain fails: " + v.reason)
      << '\n';
  return v.ok ? kExitPass : kExitFailure;
}

int cmd_class_number(const Options& o, std::ostream& out) {
  out << quadforms::class_number(o.discriminant) << '\n';
  return kExitPass;
}

int cmd_bs_table(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.min_abs < 3 || o.max_abs <= o.min_abs) {
    err << "bs-table needs 3 <= --min < --max\n";
    return kExitUsage;
  }
  const auto rows = quadforms::brauer_siegel_table(o.min_abs, o.max_abs, o.jobs);
  out << quadforms::to_csv(rows);
  err << "bs-table: " << rows.size() << " fundamental discriminants\n";
  return kExitPass;
}

int cmd_split_demo(const Options& o, std::ostream& out, std::ostream& err) {
  const auto r = quadforms::split_prime_distinctness(o.discriminant, o.bound);
  ordered_json j;
  j["discriminant"] = r.discriminant;
  j["bound"] = r.bound;
  ordered_json classes = ordered_json::array();
  for (const auto& [p, f] : r.classes) classes.push_back({{"prime", p}, {"form", f.to_string()}});
  j["classes"] = classes;
  j["distinct"] = r.distinct;
  emit(out, j);
  err << "split-demo: " << r.classes.size() << " split primes, " << (r.distinct ? "distinct" : "NOT distinct")
      << '\n';
  return r.distinct ? kExitPass : kExitFailure;
}

int cmd_cohomology(std::ostream& out, std::ostream& err) {
  using glattice::FiniteGroup;
  using glattice::GLattice;
  using intlin::IntMatrix;
  struct Case {
    std::string name;
    GLattice lattice;
    int degree;
    intlin::AbelianGroupStructure expected;
  };
  const auto c2 = FiniteGroup::cyclic(2);
  const intlin::AbelianGroupStructure z2{{2}, 0};
  const intlin::AbelianGroupStructure zero{};
  std::vector<Case> cases{
      {"H1(C2, Z-)", GLattice::from_generator_images(c2, {IntMatrix::from_rows({{-1}})}), 1, z2},
      {"H2(C2, Z)", GLattice::trivial(c2, 1), 2, z2},
      {"H1(C2, Z[C2])", GLattice::regular(c2), 1, zero},
      {"H1(C3, Z[C3])", GLattice::regular(FiniteGroup::cyclic(3)), 1, zero},
      {"H1(S3, Z[S3])", GLattice::regular(FiniteGroup::symmetric(3)), 1, zero},
  };
  emit(out, header("cohomology", {{"demo", true}}));
  bool ok = true;
  for (const auto& c : cases) {
    const auto h = glattice::cohomology(c.lattice, c.degree);
    const bool match = h == c.expected;
    ok = ok && match;
    emit(out, {{"group", c.name}, {"result", h.to_string()}, {"expected", c.expected.to_string()}, {"pass", match}});
  }
  emit(out, {{"summary", {{"cases", cases.size()}, {"pass", ok}}}});
  err << "cohomology demo: " << (ok ? "all cases match" : "MISMATCH") << '\n';
  return ok ? kExitPass : kExitFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Exhaustive checks for CM-torus reciprocity images, module transfer chains and quadratic forms",
               "cmtorus"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  auto add_jobs = [&](CLI::App* sub) {
    sub->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
  };
  auto add_cache = [&](CLI::App* sub) {
    sub->add_option("--cache-dir", o.cache_dir,
                    std::string("Enumeration cache directory (overrides ") + kCacheEnv + ")");
  };

  auto* enumerate = app.add_subcommand("enumerate", "List admissible configurations up to W_g-conjugacy");
  enumerate->add_option("--g", o.g, "Degree g")->required()->check(CLI::Range(1, cmtypes::kMaxEnumerationDegree));
  enumerate->add_flag("--primitive", o.primitive, "Keep primitive configurations only");
  add_jobs(enumerate);
  add_cache(enumerate);

  auto* verify = app.add_subcommand("verify", "Certify the reciprocity cokernel of every primitive configuration");
  verify->add_option("--g", o.g, "Degree g")->required()->check(CLI::Range(1, cmtypes::kMaxEnumerationDegree));
  verify->add_flag("--weyl", o.weyl, "Also check surjectivity for the full W_g");
  add_jobs(verify);
  add_cache(verify);

  auto* transfer = app.add_subcommand("transfer", "Verify a built-in module equivalence chain");
  transfer->add_option("--case", o.transfer_case, "gerth or quartic")
      ->required()
      ->check(CLI::IsMember({"gerth", "quartic"}));

  auto* quad = app.add_subcommand("quad", "Binary quadratic form laboratory");
  quad->require_subcommand(1);
  auto* class_number = quad->add_subcommand("class-number", "Class number of a negative discriminant");
  class_number->add_option("-d", o.discriminant, "Discriminant")->required();
  auto* bs_table = quad->add_subcommand("bs-table", "CSV of class numbers over fundamental discriminants");
  bs_table->add_option("--min", o.min_abs, "Smallest |discriminant|")->required();
  bs_table->add_option("--max", o.max_abs, "Largest |discriminant|")->required();
  add_jobs(bs_table);
  auto* split_demo = quad->add_subcommand("split-demo", "Classes of small split primes");
  split_demo->add_option("-d", o.discriminant, "Fundamental discriminant")->required();
  split_demo->add_option("-x", o.bound, "Prime bound, at most sqrt(|d|)/2")->required();

  auto* cohomology = app.add_subcommand("cohomology", "Cohomology self-tests");
  cohomology->add_flag("--demo", o.demo, "Run the built-in cases")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kExitPass;
  } catch (const CLI::Success&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n' << app.help();
    return kExitUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  int code = kExitUsage;
  try {
    if (*enumerate) code = cmd_enumerate(o, out, err);
    else if (*verify) code = cmd_verify(o, out, err);
    else if (*transfer) code = cmd_transfer(o, out, err);
    else if (*class_number) code = cmd_class_number(o, out);
    else if (*bs_table) code = cmd_bs_table(o, out, err);
    else if (*split_demo) code = cmd_split_demo(o, out, err);
    else if (*cohomology) code = cmd_cohomology(out, err);
  } catch (const quadforms::QuadformsError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  err << "wall time: " << seconds << " s\n";
  return code;
}

}  // namespace cmtorus::cli
