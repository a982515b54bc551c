// Copyright 2026 The riskagent Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "riskagent/agent/agent.hpp"
#include "riskagent/bench/harness.hpp"
#include "riskagent/bench/report.hpp"
#include "riskagent/bench/synth.hpp"
#include "riskagent/cohort/runner.hpp"
#include "riskagent/curation/pipeline.hpp"
#include "riskagent/lang/parser.hpp"
#include "riskagent/model/validate.hpp"
#include "riskagent/retrieval/index.hpp"
#include "riskagent/util/jsonl.hpp"
#include "riskagent/util/strings.hpp"

namespace riskagent::cli {

namespace fs = std::filesystem;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  bool json = false;
  std::string config;
  std::string backend;
  std::string endpoint;
  std::string registry;
  std::string index;
  std::string templates;
  std::string record;
  std::size_t top_k = 0;
  std::size_t max_turns = 0;
  std::size_t concurrency = 0;
};

void add_output(CLI::App* app, Common& c) {
  app->add_flag("--json", c.json, "Machine-readable JSON on stdout");
  app->add_option("--config", c.config, "Config file; overrides RISKAGENT_CONFIG");
}

void add_registry(CLI::App* app, Common& c) {
  app->add_option("--registry", c.registry, "Calculator registry directory or .jsonl bundle");
}

void add_llm(CLI::App* app, Common& c) {
  app->add_option("--backend", c.backend, "remote, replay:<file> or scripted:<file>");
  app->add_option("--endpoint", c.endpoint, "OpenAI-compatible base URL");
  app->add_option("--templates", c.templates, "Directory of prompt template overrides");
  app->add_option("--record", c.record, "Write every LLM exchange to this JSONL file");
  app->add_option("--concurrency", c.concurrency, "Maximum LLM requests in flight")->check(CLI::PositiveNumber);
}

void add_agent(CLI::App* app, Common& c) {
  app->add_option("--index", c.index, "Prebuilt vector index; built from the registry when absent");
  app->add_option("--top-k", c.top_k, "Candidates retrieved per query")->check(CLI::PositiveNumber);
  app->add_option("--max-turns", c.max_turns, "Turn cap per computation session")->check(CLI::PositiveNumber);
}

Config resolve(const Common& c, const EnvLookup& env) {
  std::optional<fs::path> file;
  if (!c.config.empty()) file = fs::path(c.config);
  Config cfg = load_config(file, env);
  if (!c.backend.empty()) cfg.backend = c.backend;
  if (!c.endpoint.empty()) cfg.remote.endpoint = c.endpoint;
  if (!c.registry.empty()) cfg.registry = c.registry;
  if (!c.index.empty()) cfg.index = c.index;
  if (!c.templates.empty()) cfg.templates = c.templates;
  if (c.top_k) cfg.top_k = c.top_k;
  if (c.max_turns) cfg.max_turns = c.max_turns;
  if (c.concurrency) cfg.concurrency = c.concurrency;
  return cfg;
}

fs::path existing(const fs::path& p, const std::string& what) {
  if (!fs::exists(p)) throw ConfigError(what + " " + p.string() + " does not exist");
  return p;
}

model::Registry load_registry(const Config& cfg) {
  if (cfg.registry.empty()) throw ConfigError("no calculator registry configured; pass --registry or set paths.registry");
  return model::Registry::load(existing(cfg.registry, "registry"));
}

std::shared_ptr<llm::Backend> make_backend(const Config& cfg) {
  const std::string& b = cfg.backend;
  if (b == "remote") {
    if (cfg.remote.endpoint.empty())
      throw ConfigError("the remote backend needs an endpoint; pass --endpoint or set RISKAGENT_ENDPOINT");
    return std::make_shared<llm::RemoteBackend>(cfg.remote);
  }
  if (b.rfind("replay:", 0) == 0) return llm::ReplayBackend::load(existing(b.substr(7), "replay transcript").string());
  if (b.rfind("scripted:", 0) == 0) return llm::ScriptedBackend::load(existing(b.substr(9), "script").string());
  throw ConfigError("unknown backend '" + b + "'; expected remote, replay:<file> or scripted:<file>");
}

std::unique_ptr<retrieval::EmbeddingProvider> make_embedder(const Config& cfg) {
  if (cfg.embedder == "hashing") return std::make_unique<retrieval::HashingEmbedder>(cfg.embed_dim, cfg.embed_seed);
  if (cfg.embedder == "remote") {
    if (cfg.embed_url.empty()) throw ConfigError("the remote embedder needs embedding.url");
    return std::make_unique<retrieval::RemoteEmbedder>(cfg.embed_url, cfg.remote.api_key, cfg.embed_dim);
  }
  throw ConfigError("unknown embedding provider '" + cfg.embedder + "'; expected hashing or remote");
}

llm::TemplateSet make_templates(const Config& cfg) {
  if (cfg.templates.empty()) return llm::TemplateSet::builtin();
  return llm::TemplateSet::with_overrides(existing(cfg.templates, "template directory"));
}

retrieval::VectorIndex make_index(const Config& cfg, retrieval::EmbeddingProvider& emb, const model::Registry& reg) {
  if (cfg.index.empty()) return retrieval::index_build(emb, reg, retrieval::text_source_from_string(cfg.index_source));
  auto idx = retrieval::VectorIndex::load(existing(cfg.index, "index"));
  if (idx.dim() != emb.dim())
    throw ConfigError("index " + cfg.index.string() + " has dimension " + std::to_string(idx.dim()) +
                      " but the embedder produces " + std::to_string(emb.dim()));
  for (const auto& id : idx.ids())
    if (!reg.find(id)) throw ConfigError("index " + cfg.index.string() + " names calculator " + id + ", which is not in the registry");
  return idx;
}

// Everything the LLM-driven subcommands share.
struct Runtime {
  Config cfg;
  model::Registry registry;
  std::unique_ptr<retrieval::EmbeddingProvider> embedder;
  retrieval::VectorIndex index;
  llm::TemplateSet templates;
  std::unique_ptr<llm::Gateway> gateway;

  static std::unique_ptr<Runtime> create(const Common& common, const EnvLookup& env, bool needs_index) {
    auto rt = std::make_unique<Runtime>();
    rt->cfg = resolve(common, env);
    rt->registry = load_registry(rt->cfg);
    rt->templates = make_templates(rt->cfg);
    rt->gateway = std::make_unique<llm::Gateway>(make_backend(rt->cfg), rt->cfg.concurrency);
    if (!common.record.empty()) rt->gateway->record_to(common.record);
    if (needs_index) {
      rt->embedder = make_embedder(rt->cfg);
      rt->index = make_index(rt->cfg, *rt->embedder, rt->registry);
    }
    return rt;
  }

  agent::AgentContext context() const {
    agent::AgentContext ctx{registry, index, *embedder, *gateway, templates};
    ctx.top_k = cfg.top_k;
    ctx.max_turns = cfg.max_turns;
    return ctx;
  }
};

void emit(std::ostream& out, const nlohmann::json& j) { out << j.dump(2) << "\n"; }

nlohmann::json diag_json(const lang::Diagnostic& d) {
  return {{"line", d.line}, {"column", d.column}, {"code", d.code}, {"message", d.message}};
}

// calc lint ---------------------------------------------------------------

int calc_lint(const fs::path& path, const Common& c, std::ostream& out) {
  std::string text = util::read_file(existing(path, "file"));
  if (path.extension() == ".json") {
    nlohmann::json checks = nlohmann::json::array();
    bool ok = true;
    std::string id;
    try {
      auto calc = model::Calculator::from_json(nlohmann::json::parse(text));
      id = calc.id;
      auto report = model::validate(calc);
      ok = report.all_passed();
      checks = report.to_json()["checks"];
    } catch (const nlohmann::json::parse_error& e) {
      ok = false;
      checks.push_back({{"check", "schema"}, {"passed", false}, {"detail", e.what()}});
    } catch (const model::SchemaError& e) {
      ok = false;
      checks.push_back({{"check", "schema"}, {"passed", false}, {"detail", e.what()}});
    }
    if (c.json) {
      emit(out, {{"kind", "calculator"}, {"id", id}, {"ok", ok}, {"checks", checks}});
    } else {
      for (const auto& ch : checks) {
        out << (ch["passed"].get<bool>() ? "PASS " : "FAIL ") << ch["check"].get<std::string>();
        if (!ch["detail"].get<std::string>().empty()) out << ": " << ch["detail"].get<std::string>();
        out << "\n";
      }
    }
    return ok ? kExitOk : kExitFailure;
  }

  auto diags = lang::lint(text);
  if (c.json) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& d : diags) arr.push_back(diag_json(d));
    emit(out, {{"kind", "program"}, {"ok", diags.empty()}, {"diagnostics", arr}});
  } else if (diags.empty()) {
    out << path.filename().string() << ": ok\n";
  } else {
    for (const auto& d : diags) out << path.filename().string() << ":" << d.to_string() << "\n";
  }
  return diags.empty() ? kExitOk : kExitFailure;
}

// calc eval ---------------------------------------------------------------

int calc_eval(const std::string& which, const std::string& params, const Common& c, const EnvLookup& env,
              std::ostream& out) {
  std::string id = which, title;
  std::string source;
  std::vector<lang::InterpretationBand> bands;
  if (fs::path(which).extension() == ".calc") {
    source = util::read_file(existing(which, "program"));
    id = fs::path(which).stem().string();
  } else {
    auto reg = load_registry(resolve(c, env));
    const auto* calc = reg.find(which);
    if (!calc) throw std::runtime_error("no calculator '" + which + "' in the registry");
    source = calc->program_source;
    bands = calc->interpretation;
    title = calc->title;
  }
  auto program = lang::parse(source);
  auto diags = lang::typecheck(program);
  if (!diags.empty()) throw std::runtime_error("program does not typecheck:\n" + lang::format_diagnostics(diags));

  lang::Binding binding;
  if (!params.empty()) {
    bool inline_json = params.find_first_not_of(" \t\n") != std::string::npos && params[params.find_first_not_of(" \t\n")] == '{';
    std::string text = inline_json ? params : util::read_file(existing(params, "parameter file"));
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw UsageError(std::string("--params is not valid JSON: ") + e.what());
    }
    binding = lang::binding_from_json(j);
  }
  auto outcome = lang::evaluate(program, binding, bands);

  if (c.json) {
    emit(out, {{"calculator", id}, {"title", title}, {"outcome", outcome.to_json()}});
  } else {
    out << id;
    if (!title.empty()) out << ": " << title;
    out << "\n" << outcome.render() << "\n";
  }
  return kExitOk;
}

// index -------------------------------------------------------------------

int index_build(const fs::path& dest, const std::string& source, const Common& c, const EnvLookup& env,
                std::ostream& out) {
  auto cfg = resolve(c, env);
  if (!source.empty()) cfg.index_source = source;
  auto reg = load_registry(cfg);
  auto emb = make_embedder(cfg);
  auto idx = retrieval::index_build(*emb, reg, retrieval::text_source_from_string(cfg.index_source));
  if (dest.has_parent_path()) fs::create_directories(dest.parent_path());
  idx.save(dest);
  if (c.json) {
    emit(out, {{"dim", idx.dim()}, {"count", idx.size()}, {"source", cfg.index_source}, {"provider", cfg.embedder},
               {"ids", idx.ids()}});
  } else {
    out << "wrote " << idx.size() << " vectors of dimension " << idx.dim() << " to " << dest.string() << "\n";
  }
  return kExitOk;
}

int index_inspect(const fs::path& path, const std::string& query, std::size_t k, const Common& c,
                  const EnvLookup& env, std::ostream& out) {
  auto idx = retrieval::VectorIndex::load(existing(path, "index"));
  std::vector<retrieval::RetrievalHit> hits;
  if (!query.empty()) {
    auto cfg = resolve(c, env);
    auto emb = make_embedder(cfg);
    if (emb->dim() != idx.dim())
      throw ConfigError("index has dimension " + std::to_string(idx.dim()) + " but the embedder produces " +
                        std::to_string(emb->dim()));
    hits = idx.search(emb->embed_query(query), k);
  }
  if (c.json) {
    nlohmann::json j{{"dim", idx.dim()}, {"count", idx.size()}, {"ids", idx.ids()}};
    if (!query.empty()) {
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& h : hits) arr.push_back({{"id", h.id}, {"score", h.score}});
      j["hits"] = arr;
    }
    emit(out, j);
    return kExitOk;
  }
  out << "dimension " << idx.dim() << ", " << idx.size() << " vectors\n";
  if (query.empty()) {
    for (const auto& id : idx.ids()) out << "  " << id << "\n";
  } else {
    for (std::size_t i = 0; i < hits.size(); ++i)
      out << "  " << i + 1 << ". " << hits[i].id << "  " << util::format_double(hits[i].score) << "\n";
  }
  return kExitOk;
}

// curate ------------------------------------------------------------------

int curate_run(const fs::path& corpus_path, const fs::path& dir, bool resume, const std::string& query,
               const Common& c, const EnvLookup& env, std::ostream& out) {
  auto cfg = resolve(c, env);
  auto corpus = model::load_corpus(existing(corpus_path, "corpus"));
  auto templates = make_templates(cfg);
  llm::Gateway gateway(make_backend(cfg), cfg.concurrency);
  if (!c.record.empty()) gateway.record_to(c.record);

  curation::PipelineConfig pc;
  if (!query.empty()) pc.query = curation::BooleanQuery::parse(query);
  fs::create_directories(dir);
  pc.checkpoint = dir / "checkpoint.jsonl";
  pc.resume = resume;
  pc.concurrency = cfg.concurrency;
  auto result = curation::run_pipeline(corpus, pc, gateway, templates);
  curation::write_outputs(result, dir);

  if (c.json) {
    auto counts = result.counts.to_json();
    counts["published"] = result.registry.size();
    nlohmann::json skips = nlohmann::json::array();
    for (const auto& s : result.skips) skips.push_back(s.to_json());
    emit(out, {{"counts", counts}, {"skips", skips}, {"warnings", result.warnings}});
    return kExitOk;
  }
  const auto& n = result.counts;
  out << "input          " << n.input << "\n"
      << "boolean pass   " << n.boolean_pass << "\n"
      << "screen pass    " << n.screen_pass << "\n"
      << "drafted        " << n.drafted << "\n"
      << "verified       " << n.verified << "\n"
      << "published      " << result.registry.size() << "\n";
  for (const auto& w : result.warnings) out << "warning: " << w << "\n";
  return kExitOk;
}

// agent -------------------------------------------------------------------

int agent_run(const fs::path& note_path, std::string patient, const std::string& mode, const fs::path& dir,
              const Common& c, const EnvLookup& env, std::ostream& out) {
  std::string note;
  if (note_path.extension() == ".jsonl") {
    auto notes = cohort::load_notes(existing(note_path, "notes file"));
    const cohort::NoteRecord* pick = nullptr;
    if (patient.empty() && notes.size() == 1) pick = &notes.front();
    for (const auto& n : notes)
      if (n.patient_id == patient) pick = &n;
    if (!pick) {
      if (patient.empty()) throw UsageError(note_path.string() + " holds several notes; choose one with --patient");
      throw std::runtime_error("no note for patient " + patient + " in " + note_path.string());
    }
    patient = pick->patient_id;
    note = pick->note_text;
  } else {
    note = util::read_file(existing(note_path, "note"));
    if (patient.empty()) patient = note_path.stem().string();
  }
  if (util::trim(note).empty()) throw std::runtime_error("the note is empty");

  auto rt = Runtime::create(c, env, true);
  auto result = agent::run_patient(patient, note, rt->context(), agent::select_mode_from_string(mode));

  if (!dir.empty()) {
    fs::create_directories(dir / "sessions");
    util::write_file(dir / "result.json", result.to_json().dump(2) + "\n");
    for (const auto& s : result.sessions) s.save(dir / "sessions" / (s.calculator_id + ".jsonl"));
  }
  if (c.json) {
    emit(out, result.to_json());
    return kExitOk;
  }
  const auto& sel = result.selection;
  out << "patient " << patient << "\n";
  std::vector<std::string> cands;
  for (const auto& h : sel.candidates) cands.push_back(h.id + " (" + util::format_double(h.score) + ")");
  out << "candidates: " << (cands.empty() ? "none" : util::join(cands, ", ")) << "\n";
  out << "selected: " << (sel.selected.empty() ? "none" : util::join(sel.selected, ", "))
      << (sel.fallback ? " (fallback)" : "") << "\n";
  for (const auto& w : sel.warnings) out << "warning: " << w << "\n";
  for (const auto& s : result.summaries) {
    out << "\n" << s.calculator_id << (s.ranged ? " (range estimate)" : "") << "\n";
    for (const auto& o : s.outputs) out << "  " << o.render() << "\n";
    if (!s.missing_params.empty()) out << "  missing: " << util::join(s.missing_params, ", ") << "\n";
    if (s.extraction_error) out << "  error: " << *s.extraction_error << "\n";
    if (!s.narrative.empty()) out << "  " << s.narrative << "\n";
  }
  for (const auto& f : result.failures) out << "\nfailed: " << f.calculator_id << ": " << f.reason << "\n";
  return kExitOk;
}

// bench -------------------------------------------------------------------

int bench_run(const fs::path& data, std::vector<std::string> methods, std::vector<std::string> settings,
              const fs::path& dir, const Common& c, const EnvLookup& env, std::ostream& out) {
  bool explicit_settings = !settings.empty();
  if (methods.empty()) methods = {"agent"};
  if (settings.empty()) settings = {"riskqa", "riskqa_star"};

  std::vector<std::pair<bench::Method, bench::Setting>> plan;
  for (const auto& m : methods) {
    for (const auto& s : settings) {
      auto method = bench::method_from_string(m);
      auto setting = bench::setting_from_string(s);
      try {
        bench::check_combination(method, setting);
      } catch (const std::invalid_argument& e) {
        if (explicit_settings) throw UsageError(e.what());
        continue;
      }
      plan.emplace_back(method, setting);
    }
  }

  auto rt = Runtime::create(c, env, true);
  auto items = bench::load_dataset(existing(data, "dataset"), &rt->registry);
  auto ctx = rt->context();
  std::vector<bench::MethodRun> runs;
  for (const auto& [m, s] : plan) {
    auto r = bench::run_benchmark(items, m, s, ctx);
    runs.insert(runs.end(), r.begin(), r.end());
  }
  auto report = bench::score(runs, items);

  if (!dir.empty()) {
    fs::create_directories(dir);
    std::vector<nlohmann::json> lines;
    for (const auto& r : runs) lines.push_back(r.to_json());
    util::write_jsonl(dir / "runs.jsonl", lines);
    util::write_file(dir / "report.json", report.to_json().dump(2) + "\n");
    util::write_file(dir / "report.csv", report.to_csv());
  }
  if (c.json) emit(out, report.to_json());
  else out << report.render();
  return kExitOk;
}

int bench_synth(const fs::path& dest, std::size_t per, std::uint64_t seed, const Common& c, const EnvLookup& env,
                std::ostream& out) {
  auto rt = Runtime::create(c, env, false);
  auto res = bench::synthesize(rt->registry, *rt->gateway, rt->templates, {per, seed});
  if (dest.has_parent_path()) fs::create_directories(dest.parent_path());
  bench::save_dataset(res.items, dest);
  if (c.json) {
    nlohmann::json ids = nlohmann::json::array();
    for (const auto& it : res.items) ids.push_back(it.id);
    emit(out, {{"items", res.items.size()}, {"ids", ids}, {"warnings", res.warnings}});
  } else {
    out << "wrote " << res.items.size() << " items to " << dest.string() << "\n";
    for (const auto& w : res.warnings) out << "warning: " << w << "\n";
  }
  return kExitOk;
}

// cohort ------------------------------------------------------------------

int cohort_run(const fs::path& notes_path, const fs::path& dir, bool resume, const Common& c, const EnvLookup& env,
               std::ostream& out) {
  auto notes = cohort::load_notes(existing(notes_path, "notes file"));
  auto rt = Runtime::create(c, env, true);
  fs::create_directories(dir);
  cohort::CohortConfig cc;
  cc.checkpoint = dir / "checkpoint.jsonl";
  cc.resume = resume;
  cc.concurrency = rt->cfg.concurrency;
  auto run = cohort::run_cohort(notes, rt->context(), cc);
  cohort::write_outputs(run, dir);

  std::size_t failures = 0, flagged = 0;
  for (const auto& p : run.patients) {
    failures += p.failures.size();
    flagged += !p.flags.empty();
  }
  if (c.json) {
    emit(out, {{"report", run.report.to_json()}, {"failures", failures}, {"flagged_patients", flagged}});
    return kExitOk;
  }
  const auto& r = run.report;
  out << "patients " << r.patients << ", results " << r.results << ", mean per patient "
      << util::format_double(r.mean_per_patient) << "\n";
  out << "session failures " << failures << ", flagged patients " << flagged << "\n\n";
  out << r.per_calculator_csv();
  return kExitOk;
}

std::string usage_of(const CLI::App& app) {
  const CLI::App* cur = &app;
  while (!cur->get_subcommands().empty()) cur = cur->get_subcommands().back();
  return cur->help();
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const EnvLookup& env) {
  CLI::App app{"Clinical risk calculators: curation, selection, computation and evaluation.", "riskagent"};
  app.set_version_flag("--version", "riskagent 0.1.0");
  app.require_subcommand(1);
  Common c;

  auto* calc = app.add_subcommand("calc", "Lint or evaluate calculators directly, without any LLM");
  calc->require_subcommand(1);
  auto* lint = calc->add_subcommand("lint", "Check a .calc program or a calculator .json document");
  std::string lint_path;
  lint->add_option("file", lint_path, "Program or calculator document")->required();
  add_output(lint, c);

  auto* eval = calc->add_subcommand("eval", "Evaluate a calculator on given parameter values");
  std::string eval_calc, eval_params;
  eval->add_option("calculator", eval_calc, "Registry id or .calc file")->required();
  eval->add_option("--params", eval_params, "JSON object, inline or as a file, of parameter values; missing ones are UNKNOWN");
  add_output(eval, c);
  add_registry(eval, c);

  auto* index = app.add_subcommand("index", "Build or inspect a retrieval index");
  index->require_subcommand(1);
  auto* ibuild = index->add_subcommand("build", "Embed every verified calculator");
  std::string ibuild_out, ibuild_source;
  ibuild->add_option("--out", ibuild_out, "Index file to write")->required();
  ibuild->add_option("--source", ibuild_source, "Text embedded per calculator")
      ->check(CLI::IsMember({"raw_abstract", "digest"}));
  add_output(ibuild, c);
  add_registry(ibuild, c);

  auto* iinspect = index->add_subcommand("inspect", "Describe an index, optionally running a query");
  std::string inspect_path, inspect_query;
  std::size_t inspect_k = 10;
  iinspect->add_option("file", inspect_path, "Index file")->required();
  iinspect->add_option("--query", inspect_query, "Text to search for");
  iinspect->add_option("-k", inspect_k, "Hits to show")->check(CLI::PositiveNumber);
  add_output(iinspect, c);

  auto* curate = app.add_subcommand("curate", "Turn abstracts into verified calculators");
  curate->require_subcommand(1);
  auto* crun = curate->add_subcommand("run", "Run the curation funnel over a corpus");
  std::string crun_corpus, crun_out, crun_query;
  bool crun_resume = false;
  crun->add_option("--corpus", crun_corpus, "JSONL abstracts")->required();
  crun->add_option("--out", crun_out, "Output directory")->required();
  crun->add_option("--query", crun_query, "Boolean prefilter, e.g. \"risk AND (score OR model)\"");
  crun->add_flag("--resume", crun_resume, "Continue from the checkpoint in the output directory");
  add_output(crun, c);
  add_llm(crun, c);

  auto* agent_cmd = app.add_subcommand("agent", "Select and run calculators for one patient note");
  agent_cmd->require_subcommand(1);
  auto* arun = agent_cmd->add_subcommand("run", "Run tool selection and computation on a note");
  std::string arun_note, arun_patient, arun_mode = "multi", arun_out;
  arun->add_option("--note", arun_note, "Plain-text note, or a notes .jsonl with --patient")->required();
  arun->add_option("--patient", arun_patient, "Patient id");
  arun->add_option("--mode", arun_mode, "Selection mode")->check(CLI::IsMember({"single", "multi"}));
  arun->add_option("--out", arun_out, "Directory for result.json and session transcripts");
  add_output(arun, c);
  add_registry(arun, c);
  add_llm(arun, c);
  add_agent(arun, c);

  auto* bench_cmd = app.add_subcommand("bench", "Multiple-choice risk benchmark");
  bench_cmd->require_subcommand(1);
  auto* brun = bench_cmd->add_subcommand("run", "Score methods on a dataset");
  std::string brun_data, brun_out;
  std::vector<std::string> brun_methods, brun_settings;
  brun->add_option("--data", brun_data, "Dataset JSONL")->required();
  brun->add_option("--method", brun_methods, "agent, cot, rag or name; repeatable")
      ->check(CLI::IsMember({"agent", "cot", "rag", "name"}));
  brun->add_option("--setting", brun_settings, "riskqa or riskqa_star; repeatable")
      ->check(CLI::IsMember({"riskqa", "riskqa_star", "riskqa-star"}));
  brun->add_option("--out", brun_out, "Directory for runs.jsonl, report.json and report.csv");
  add_output(brun, c);
  add_registry(brun, c);
  add_llm(brun, c);
  add_agent(brun, c);

  auto* bsynth = bench_cmd->add_subcommand("synth", "Write vignettes for the registry's calculators");
  std::string bsynth_out;
  std::size_t bsynth_per = 1;
  std::uint64_t bsynth_seed = 0;
  bsynth->add_option("--out", bsynth_out, "Dataset JSONL to write")->required();
  bsynth->add_option("--per-calculator", bsynth_per, "Items per calculator")->check(CLI::PositiveNumber);
  bsynth->add_option("--seed", bsynth_seed, "Parameter sampling seed");
  add_output(bsynth, c);
  add_registry(bsynth, c);
  add_llm(bsynth, c);

  auto* cohort_cmd = app.add_subcommand("cohort", "Risk analytics over a corpus of notes");
  cohort_cmd->require_subcommand(1);
  auto* corun = cohort_cmd->add_subcommand("run", "List, select, compute and score risks for every note");
  std::string corun_notes, corun_out;
  bool corun_resume = false;
  corun->add_option("--notes", corun_notes, "Notes JSONL")->required();
  corun->add_option("--out", corun_out, "Output directory")->required();
  corun->add_flag("--resume", corun_resume, "Continue from the checkpoint in the output directory");
  add_output(corun, c);
  add_registry(corun, c);
  add_llm(corun, c);
  add_agent(corun, c);

  if (!args.empty() && !args[0].empty() && args[0][0] != '-') {
    try {
      (void)app.get_subcommand(args[0]);
    } catch (const CLI::OptionNotFound&) {
      err << "error: unknown subcommand '" << args[0] << "'\n\n" << app.help();
      return kExitUsage;
    }
  }
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << usage_of(app);
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    out << e.what() << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << usage_of(app);
    return kExitUsage;
  }

  auto fail = [&](const std::string& msg, int code) {
    err << "error: " << msg << "\n";
    if (c.json) emit(out, {{"error", msg}, {"exit_code", code}});
    return code;
  };
  try {
    if (lint->parsed()) return calc_lint(lint_path, c, out);
    if (eval->parsed()) return calc_eval(eval_calc, eval_params, c, env, out);
    if (ibuild->parsed()) return index_build(ibuild_out, ibuild_source, c, env, out);
    if (iinspect->parsed()) return index_inspect(inspect_path, inspect_query, inspect_k, c, env, out);
    if (crun->parsed()) return curate_run(crun_corpus, crun_out, crun_resume, crun_query, c, env, out);
    if (arun->parsed()) return agent_run(arun_note, arun_patient, arun_mode, arun_out, c, env, out);
    if (brun->parsed()) return bench_run(brun_data, brun_methods, brun_settings, brun_out, c, env, out);
    if (bsynth->parsed()) return bench_synth(bsynth_out, bsynth_per, bsynth_seed, c, env, out);
    if (corun->parsed()) return cohort_run(corun_notes, corun_out, corun_resume, c, env, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << usage_of(app);
    return kExitUsage;
  } catch (const ConfigError& e) {
    return fail(e.what(), kExitUsage);
  } catch (const std::exception& e) {
    return fail(e.what(), kExitFailure);
  }
  err << usage_of(app);
  return kExitUsage;
}

int cli_dispatch(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cli_dispatch(args, std::cout, std::cerr);
}

}  // namespace riskagent::cli
