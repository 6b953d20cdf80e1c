#include "cocon/report.hpp"

#include <chrono>
#include <sstream>

#include "cocon/check.hpp"
#include "cocon/fitch.hpp"
#include "cocon/translate.hpp"

namespace cocon {

namespace {

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out;
}

bool expectation_matches(const Expectation& e, const ReportRecord& r, const Checker& chk,
                         const CompTermPtr& nf_term, const CompTermPtr& expected_term) {
  switch (e.kind) {
    case Expectation::Kind::Ok:
      return r.verdict == "ok";
    case Expectation::Kind::TypeError: {
      if (r.verdict != "type-error") return false;
      if (e.error_class.empty()) return true;
      return r.detail.rfind(e.error_class + ":", 0) == 0 || r.detail == e.error_class;
    }
    case Expectation::Kind::Eval: {
      if (r.verdict != "ok" || !nf_term || !expected_term) return false;
      CompCtx g;
      return chk.equal_comp(g, nf_term, expected_term);
    }
  }
  return false;
}

}  // namespace

FileResult run_source(const std::string& text, const RunOptions& opts) {
  FileResult out;
  SourceFile file;
  try {
    file = parse(text, opts.default_mode);
  } catch (const Error& e) {
    if (e.code() == Errc::SyntaxError) throw;  // usage-level failure
    ReportRecord r;
    r.name = "(file)";
    r.judgment = "(parse)";
    r.verdict = "type-error";
    r.detail = e.what();
    // directives cannot attach to declarations when the parse fails; honor a
    // file-level expectation by scanning the comment text directly
    std::istringstream ls(text);
    std::string line;
    while (std::getline(ls, line)) {
      auto pos = line.find("--expect: type-error");
      if (pos == std::string::npos) continue;
      std::string cls = line.substr(pos + 20);
      auto a = cls.find_first_not_of(" \t");
      r.matches_expectation =
          a == std::string::npos || r.detail.rfind(cls.substr(a) + ":", 0) == 0;
    }
    out.all_match = out.all_match && r.matches_expectation;
    out.records.push_back(std::move(r));
    return out;
  }
  out.mode = file.mode;

  DeclTable table = decl_table(file);
  CheckState st{file.mode, opts.fuel, RedexOrder::LeftFirst, &table};
  Checker chk(st);
  Translator tr(st);
  FitchTranslator ftr(st);
  InternalChecker ichk(signature_for(file.mode), opts.fuel);
  FitchChecker fchk(opts.fuel);

  for (auto& d : file.decls) {
    ReportRecord r;
    r.name = d.name;
    r.judgment = print_ann_type(d.ascription, file.mode);
    auto t0 = std::chrono::steady_clock::now();
    CompTermPtr nf;
    try {
      chk.check_decl(d.ascription, d.body);
      r.verdict = "ok";
      CompCtx g;
      if (opts.evaluate || d.expect.kind == Expectation::Kind::Eval) {
        if (auto* tm = std::get_if<CompTermPtr>(&d.body)) {
          nf = chk.normalize_comp(g, *tm);
          r.normal_form = print_comp_term(nf, file.mode);
        }
      }
      if ((opts.translate_internal || opts.translate_fitch) &&
          std::holds_alternative<CompTermPtr>(d.body) && !d.ascription.is_ctx()) {
        const CompTermPtr& tm = std::get<CompTermPtr>(d.body);
        if (opts.translate_internal) {
          TranslationOutput tout = tr.translate(g, tm, d.ascription.type);
          ichk.check(tout.crisp_ctx, {}, tout.term, tout.type);
          r.translations.push_back("internal: " + print_iterm(tout.term));
          if (opts.trace)
            for (auto& line : tout.trace) out.traces.push_back(d.name + ": " + line);
        }
        if (opts.translate_fitch) {
          FitchOutput fout = ftr.translate(g, tm, d.ascription.type);
          FCtx fg;
          for (auto& ty : fout.ctx) fg = fg.extended(ty);
          fchk.check(fg, fout.term, fout.type);
          r.translations.push_back("fitch: " + print_fterm(fout.term));
        }
      }
    } catch (const Error& e) {
      r.verdict = e.code() == Errc::FuelExhausted ? "unknown" : "type-error";
      r.detail = e.what();
    }
    auto t1 = std::chrono::steady_clock::now();
    r.ms = opts.timings
               ? std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count()
               : 0;
    r.matches_expectation = expectation_matches(d.expect, r, chk, nf, d.expect.eval_term);
    if (!r.matches_expectation) out.all_match = false;
    out.records.push_back(std::move(r));
  }
  return out;
}

std::string report_jsonl(const std::vector<ReportRecord>& records, bool timings) {
  std::ostringstream os;
  for (auto& r : records) {
    os << "{\"name\":\"" << json_escape(r.name) << "\",\"judgment\":\""
       << json_escape(r.judgment) << "\",\"verdict\":\"" << json_escape(r.verdict)
       << "\",\"ms\":" << (timings ? r.ms : 0) << "}\n";
  }
  return os.str();
}

std::string report_text(const std::vector<ReportRecord>& records) {
  std::ostringstream os;
  for (auto& r : records) {
    os << r.name << " : " << r.judgment << " -- " << r.verdict;
    if (!r.detail.empty()) os << " (" << r.detail << ")";
    if (!r.normal_form.empty()) os << "\n  = " << r.normal_form;
    for (auto& t : r.translations) os << "\n  " << t;
    os << "\n";
  }
  return os.str();
}

}  // namespace cocon
