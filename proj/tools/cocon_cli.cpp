#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cocon/presheaf.hpp"
#include "cocon/report.hpp"

using namespace cocon;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::IoError, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Mode parse_mode(const std::string& m) {
  if (m == "simple") return Mode::Simple;
  if (m == "dep") return Mode::Dep;
  fail(Errc::UsageError, "unknown mode " + m);
}

// exit 0: all verdicts match directives; 1: mismatch or type error; 2: usage/io/parse
// files are processed concurrently; records are emitted in input order
int run_files(const std::vector<std::string>& files, RunOptions opts,
              const std::string& format, bool quiet) {
  std::vector<std::future<FileResult>> jobs;
  jobs.reserve(files.size());
  for (auto& f : files)
    jobs.push_back(std::async(std::launch::async,
                              [&opts, text = slurp(f)] { return run_source(text, opts); }));
  std::vector<ReportRecord> all;
  bool match = true;
  for (std::size_t i = 0; i < files.size(); i++) {
    FileResult res = jobs[i].get();
    for (auto& r : res.records) {
      if (!r.matches_expectation)
        std::cerr << files[i] << ": " << r.name << ": "
                  << (r.detail.empty() ? r.verdict : r.detail) << "\n";
      all.push_back(r);
    }
    for (auto& t : res.traces) std::cout << t << "\n";
    match = match && res.all_match;
  }
  if (!quiet) {
    if (format == "jsonl")
      std::cout << report_jsonl(all, opts.timings);
    else
      std::cout << report_text(all);
  }
  return match ? 0 : 1;
}

int verify_model(const std::string& path) {
  FiniteCategory cat = load_category(slurp(path));
  std::cout << "category: " << cat.objects.size() << " objects, " << cat.morphisms.size()
            << " morphisms -- laws ok\n";
  bool ok = true;
  auto line = [&](const std::string& name, bool pass) {
    std::cout << (pass ? "pass" : "FAIL") << "  " << name << "\n";
    ok = ok && pass;
  };
  // yoneda counts on all pairs
  bool counts = true;
  for (std::size_t a = 0; a < cat.objects.size(); a++)
    for (std::size_t b = 0; b < cat.objects.size(); b++)
      if (nat_transformations(yoneda(cat, a), yoneda(cat, b)).size() != cat.hom(a, b).size())
        counts = false;
  line("nat(y-, y-) counts match hom counts on all pairs", counts);
  line("yoneda embedding is full and faithful", yoneda_full_faithful(cat));
  if (cat.terminal) {
    std::mt19937 rng(97);
    std::vector<FinitePresheaf> samples;
    for (int i = 0; i < 10; i++) samples.push_back(random_presheaf(cat, rng, 4));
    LawReport rep = check_comonad_laws(cat, samples);
    for (auto& l : rep.lines) line(l.law, l.pass);
    // currying counts
    bool curry = true;
    for (int i = 0; i < 5; i++) {
      FinitePresheaf F = random_presheaf(cat, rng, 2);
      FinitePresheaf G = random_presheaf(cat, rng, 2);
      FinitePresheaf H = random_presheaf(cat, rng, 2);
      if (nat_transformations(product(F, G), H).size() !=
          nat_transformations(F, exponential(G, H)).size())
        curry = false;
    }
    line("currying bijection counts on 5 random triples", curry);
  } else {
    std::cout << "note: no terminal object; comonad checks skipped\n";
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cocon kernel: checker, evaluator, interpreters and the finite presheaf lab"};
  app.require_subcommand(1);

  std::string mode = "simple";
  long fuel = 1000000;
  std::vector<std::string> files;
  std::string decl_name;
  std::string target = "internal";
  std::string format = "text";
  bool trace = false;
  bool timings = false;

  auto* check = app.add_subcommand("check", "type-check source files");
  check->add_option("--mode", mode, "default mode when a file has no mode directive");
  check->add_option("--fuel", fuel, "reduction step bound");
  check->add_option("files", files)->required()->expected(-1);

  auto* eval = app.add_subcommand("eval", "normalize one declaration");
  eval->add_option("--mode", mode);
  eval->add_option("--fuel", fuel);
  eval->add_option("--decl", decl_name, "declaration to evaluate")->required();
  eval->add_option("file", files)->required()->expected(1);

  auto* translate = app.add_subcommand("translate", "interpret into a target theory");
  translate->add_option("--mode", mode);
  translate->add_option("--fuel", fuel);
  translate->add_option("--target", target, "internal or fitch");
  translate->add_flag("--trace", trace, "emit the per-node figure-case log");
  translate->add_option("files", files)->required()->expected(-1);

  auto* verify = app.add_subcommand("verify-model", "validate a finite category file");
  verify->add_option("file", files)->required()->expected(1);

  auto* report = app.add_subcommand("report", "emit per-declaration records");
  report->add_option("--mode", mode);
  report->add_option("--fuel", fuel);
  report->add_option("--format", format, "text or jsonl");
  report->add_flag("--timings", timings, "measure wall-clock times (non-deterministic)");
  report->add_option("files", files)->required()->expected(-1);

  CLI11_PARSE(app, argc, argv);

  try {
    RunOptions opts;
    opts.default_mode = parse_mode(mode);
    opts.fuel = fuel;
    opts.timings = timings;
    if (check->parsed()) return run_files(files, opts, "text", true);
    if (eval->parsed()) {
      opts.evaluate = true;
      FileResult res = run_source(slurp(files[0]), opts);
      for (auto& r : res.records) {
        if (r.name != decl_name) continue;
        if (r.verdict != "ok") {
          std::cerr << r.detail << "\n";
          return 1;
        }
        std::cout << r.normal_form << "\n";
        return 0;
      }
      std::cerr << "no declaration named " << decl_name << "\n";
      return 2;
    }
    if (translate->parsed()) {
      if (target == "internal") opts.translate_internal = true;
      else if (target == "fitch") opts.translate_fitch = true;
      else fail(Errc::UsageError, "unknown target " + target);
      opts.trace = trace;
      return run_files(files, opts, "text", false);
    }
    if (verify->parsed()) return verify_model(files[0]);
    if (report->parsed()) return run_files(files, opts, format, false);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    // parse and io errors are usage-level failures
    switch (e.code()) {
      case Errc::SyntaxError:
      case Errc::UsageError:
      case Errc::IoError:
      case Errc::UnknownObject:
      case Errc::LawViolation:
        return 2;
      default:
        return 1;
    }
  }
  return 2;
}
