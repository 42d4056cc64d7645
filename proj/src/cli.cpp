#include "asgmkg/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <sstream>

#include "asgmkg/api.hpp"
#include "asgmkg/bench.hpp"
#include "asgmkg/config.hpp"
#include "asgmkg/error.hpp"
#include "asgmkg/text.hpp"
#include "asgmkg/ntriples.hpp"

namespace asgmkg {

namespace {

struct Options {
  std::string project = ".";
  std::string mode;
  std::size_t parallelism = 0;
  bool json = false;

  std::string corpus;
  std::size_t chunk_words = 0;

  std::size_t n_hits = 0, k_pages = 0, min_evidence = 0;
  double tau = -1;
  std::string judge_mode;
  bool revalidate = false;

  std::string benchmark, corrections, outcomes_out, records_out;

  std::string subject, predicate, object;
  std::string source, target, direction = "both";
  std::size_t k = 1, max_hops = 3;

  std::string entities_file, relations_file;
  std::string out;
  bool all = false;

  std::string host = "127.0.0.1", cors = "*";
  int port = 8080;

  std::string triple_id, label, reviewer, note;
};

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("IoError", "cannot write " + path);
  f << content;
}

std::set<std::string> read_label_set(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("IoError", "cannot read " + path);
  std::set<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (text::trim_ascii(line).empty()) continue;
    out.insert(Label::normalize(line).text());
  }
  return out;
}

ProjectConfig effective_config(const Options& o) {
  auto c = load_config(o.project);
  if (!o.mode.empty()) c.mode = client_mode_from_string(o.mode);
  if (o.parallelism) c.das.parallelism = c.extract.parallelism = o.parallelism;
  if (o.chunk_words) c.extract.max_words = o.chunk_words;
  if (o.n_hits) c.das.n_hits = o.n_hits;
  if (o.k_pages) c.das.k_pages = o.k_pages;
  if (o.min_evidence) c.das.min_evidence = o.min_evidence;
  if (o.tau >= 0) c.das.relevance_threshold = o.tau;
  if (o.judge_mode == "summarize") c.das.judge_mode = JudgeMode::summarize;
  else if (o.judge_mode == "truncate") c.das.judge_mode = JudgeMode::truncate;
  else if (!o.judge_mode.empty()) throw InvalidArgument("--judge-mode must be truncate or summarize");
  c.das.validate();
  return c;
}

Direction parse_direction(const std::string& s) {
  auto d = direction_from_string(s);
  if (!d) throw InvalidArgument("--direction must be out, in or both");
  return *d;
}

void print_triples(std::ostream& out, const Json& triples) {
  for (const auto& t : triples) {
    out << t.at("id").get<std::string>() << '\t' << t.at("subject").get<std::string>() << '\t'
        << (t.at("negated").get<bool>() ? "not " : "") << t.at("predicate").get<std::string>() << '\t'
        << t.at("object").get<std::string>() << '\t' << t.at("status").get<std::string>() << '\n';
  }
}

int cmd_ingest(const Options& o, std::ostream& out) {
  ProjectStore store(o.project);
  const auto n = store.ingest(o.corpus);
  out << Json{{"documents", n}, {"corpus", store.corpus_path().string()}}.dump() << '\n';
  return kExitOk;
}

int cmd_extract(const Options& o, std::ostream& out) {
  ProjectStore store(o.project);
  const auto config = effective_config(o);
  const auto clients = build_clients(config);
  const auto run = run_extraction(store.corpus(), *clients.llm, config.extract);
  store.write_extraction(run);
  const auto snap = store.rebuild();
  out << Json{{"chunks", run.chunk_count},
              {"accepted", run.accepted_count()},
              {"rejected", run.rejected_count()},
              {"failed_chunks", run.failures.size()},
              {"triples", snap.graph.size()}}
             .dump()
      << '\n';
  return kExitOk;
}

int cmd_validate(const Options& o, std::ostream& out) {
  ProjectStore store(o.project);
  const auto config = effective_config(o);
  const auto clients = build_clients(config);
  auto snap = store.load();
  std::vector<Triple> batch;
  for (const auto& [_, t] : snap.graph.triples()) {
    if (t.status == Status::pending || (o.revalidate && !is_expert(t.status))) {
      Triple copy = t;
      copy.status = Status::pending;
      batch.push_back(std::move(copy));
    }
  }
  const auto records = validate_all(batch, config.das, clients);
  store.append_validation(records);
  const auto after = store.rebuild();
  std::map<std::string, std::size_t> tally;
  for (const auto& r : records) ++tally[std::string(to_string(r.outcome))];
  out << Json{{"validated", records.size()}, {"outcomes", tally}, {"triples", after.graph.size()}}.dump() << '\n';
  return kExitOk;
}

Json report_json(const MetricsReport& r, const ConfusionMatrix& m) {
  auto num = [](double v, bool undefined) { return undefined ? Json(nullptr) : Json(v); };
  return Json{{"accuracy", r.accuracy},
              {"precision", num(r.precision, r.precision_undefined)},
              {"recall", num(r.recall, r.recall_undefined)},
              {"f1", num(r.f1, r.f1_undefined)},
              {"unclassified", r.unclassified_count},
              {"confusion", Json{{"tp", m.tp}, {"fp", m.fp}, {"fn", m.fn}, {"tn", m.tn}}}};
}

int cmd_eval(const Options& o, std::ostream& out) {
  const auto config = effective_config(o);
  const auto clients = build_clients(config);
  auto dataset = load_benchmark(o.benchmark);
  Json result;
  auto run_one = [&](const Dataset& d, std::string_view name) {
    auto run = run_benchmark(d, config.das, clients);
    if (run.empty_matrix) throw EmptyMatrix("every prediction was unverifiable");
    if (!o.json) out << render_report_table(run.report, name, name == "DAS") << '\n';
    result[std::string(name)] = report_json(run.report, run.confusion.matrix);
    return run;
  };
  const auto base = run_one(dataset, "DAS");
  if (!o.outcomes_out.empty()) {
    std::string lines;
    for (const auto& x : base.outcomes) {
      lines += Json{{"triple_id", x.triple_id}, {"gold", std::string(to_string(x.gold))},
                    {"outcome", std::string(to_string(x.outcome))}}
                   .dump() +
               "\n";
    }
    write_text_file(o.outcomes_out, lines);
  }
  if (!o.records_out.empty()) {
    std::string lines;
    for (const auto& r : base.records) lines += Json(r).dump() + "\n";
    write_text_file(o.records_out, lines);
  }
  if (!o.corrections.empty()) {
    const auto corrected = apply_corrections(dataset, load_corrections(o.corrections));
    run_one(corrected, "DAS (corrected ground truth)");
  }
  if (o.json) out << result.dump() << '\n';
  return kExitOk;
}

int cmd_query(const Options& o, std::ostream& out) {
  const auto snap = ProjectStore(o.project).load();
  const auto payload = query_payload(snap.graph, Pattern::from_raw(o.subject, o.predicate, o.object));
  if (o.json) out << payload.dump() << '\n';
  else print_triples(out, payload.at("triples"));
  return kExitOk;
}

int cmd_khop(const Options& o, std::ostream& out) {
  const auto snap = ProjectStore(o.project).load();
  const auto sub = k_hop(snap.graph, Label::normalize(o.source), o.k, parse_direction(o.direction));
  const auto payload = khop_payload(snap.graph, sub);
  if (o.json) out << payload.dump() << '\n';
  else out << payload.at("summary").get<std::string>();
  return kExitOk;
}

int cmd_paths(const Options& o, std::ostream& out) {
  const auto snap = ProjectStore(o.project).load();
  const auto result = enumerate_paths(snap.graph, Label::normalize(o.source), Label::normalize(o.target),
                                      o.max_hops, parse_direction(o.direction));
  const auto payload = paths_payload(snap.graph, result);
  if (o.json) out << payload.dump() << '\n';
  else out << payload.at("summary").get<std::string>();
  return kExitOk;
}

int cmd_stats(const Options& o, std::ostream& out) {
  const auto payload = stats_payload(ProjectStore(o.project).load());
  if (o.json) {
    out << payload.dump() << '\n';
    return kExitOk;
  }
  out << "triples: " << payload.at("triple_count") << '\n'
      << "entities: " << payload.at("unique_entity_count") << '\n'
      << "relations: " << payload.at("unique_relation_count") << '\n';
  for (const auto& [status, n] : payload.at("status_histogram").items()) out << status << ": " << n << '\n';
  return kExitOk;
}

int cmd_novelty(const Options& o, std::ostream& out) {
  const auto snap = ProjectStore(o.project).load();
  const auto r = novelty_report(snap.graph, read_label_set(o.entities_file), read_label_set(o.relations_file));
  out << Json{{"entity_novel_fraction", r.entity_novel_fraction},
              {"relation_novel_fraction", r.relation_novel_fraction}}
             .dump()
      << '\n';
  return kExitOk;
}

int cmd_export(const Options& o, std::ostream& out) {
  const auto snap = ProjectStore(o.project).load();
  const auto nt = export_ntriples(snap, o.all);
  if (o.out.empty() || o.out == "-") {
    out << nt;
  } else {
    write_text_file(o.out, nt);
  }
  return kExitOk;
}

int cmd_rebuild(const Options& o, std::ostream& out) {
  const auto snap = ProjectStore(o.project).rebuild();
  out << Json{{"triples", snap.graph.size()}, {"review_events", snap.review_event_count}}.dump() << '\n';
  return kExitOk;
}

int cmd_agreement(const Options& o, std::ostream& out) {
  const auto payload = agreement_payload(ProjectStore(o.project).load());
  if (o.json) {
    out << payload.dump() << '\n';
  } else if (payload.at("agreement").is_null()) {
    out << payload.at("message").get<std::string>() << '\n';
  } else {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", payload.at("agreement").get<double>());
    out << "agreement: " << buf << " (" << payload.at("matches") << "/" << payload.at("compared") << ", "
        << payload.at("excluded") << " excluded)\n";
  }
  return kExitOk;
}

int emit_error(std::ostream& err, std::string_view kind, std::string_view message, int code) {
  err << Json{{"error", kind}, {"message", message}}.dump() << '\n';
  return code;
}

int cmd_review(const Options& o, std::ostream& out, std::ostream& err) {
  const auto config = load_config(o.project);
  ApiService service(ProjectStore(o.project), ClientSet{}, config.chat_budget);
  const Json body{{"expert_label", o.label}, {"reviewer", o.reviewer}, {"note", o.note}};
  const auto r = service.handle("POST", "/triples/" + o.triple_id + "/review", {}, body.dump());
  if (r.status != 200) {
    const auto j = Json::parse(r.body);
    return emit_error(err, j.value("error", "Error"), j.value("message", ""), r.status == 400 ? kExitUsage : kExitFailure);
  }
  ProjectStore(o.project).rebuild();
  out << r.body << '\n';
  return kExitOk;
}

int cmd_serve(const Options& o, std::ostream& out) {
  const auto config = load_config(o.project);
  ProjectConfig c = config;
  if (!o.mode.empty()) c.mode = client_mode_from_string(o.mode);
  ApiService service(ProjectStore(o.project), build_clients(c), c.chat_budget);
  HttpServer server(service, o.cors);
  out << "serving on http://" << o.host << ":" << o.port << std::endl;
  if (!server.listen(o.host, o.port)) throw Error("IoError", "cannot listen on port " + std::to_string(o.port));
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Knowledge graph construction, validation and exploration", "asgmkg"};
  app.require_subcommand(1);
  app.add_option("--project", o.project, "Project directory")->capture_default_str();

  auto mode_opt = [&](CLI::App* sub) {
    sub->add_option("--mode", o.mode, "Client mode")->check(CLI::IsMember({"fixture", "record", "replay", "live"}));
  };
  auto das_opts = [&](CLI::App* sub) {
    sub->add_option("--n", o.n_hits, "Search hits per triple");
    sub->add_option("--k", o.k_pages, "Pages judged per triple");
    sub->add_option("--tau", o.tau, "Relevance threshold");
    sub->add_option("--min-evidence", o.min_evidence, "Minimum verdicts for a decision");
    sub->add_option("--judge-mode", o.judge_mode, "truncate or summarize");
    sub->add_option("--parallelism", o.parallelism, "Concurrent validations");
    mode_opt(sub);
  };

  auto* ingest = app.add_subcommand("ingest", "Copy a corpus into the project");
  ingest->add_option("corpus", o.corpus, "Corpus JSONL file")->required();

  auto* extract = app.add_subcommand("extract", "Extract triples from the corpus");
  extract->add_option("--chunk-words", o.chunk_words, "Maximum words per chunk");
  extract->add_option("--parallelism", o.parallelism, "Concurrent chunks");
  mode_opt(extract);

  auto* validate = app.add_subcommand("validate", "Validate pending triples");
  das_opts(validate);
  validate->add_flag("--revalidate", o.revalidate, "Also revalidate machine-labelled triples");

  auto* eval = app.add_subcommand("eval", "Run the benchmark");
  eval->add_option("benchmark", o.benchmark, "Benchmark TSV")->required();
  eval->add_option("--corrections", o.corrections, "Ground-truth corrections JSONL");
  eval->add_option("--outcomes", o.outcomes_out, "Write per-triple outcomes JSONL");
  eval->add_option("--records", o.records_out, "Write validation records JSONL");
  eval->add_flag("--json", o.json, "JSON output");
  das_opts(eval);

  auto* query = app.add_subcommand("query", "Pattern match over the graph");
  query->add_option("--subject", o.subject);
  query->add_option("--predicate", o.predicate);
  query->add_option("--object", o.object);
  query->add_flag("--json", o.json, "JSON output");

  auto* khop = app.add_subcommand("khop", "Subgraph around an entity");
  khop->add_option("--source", o.source)->required();
  khop->add_option("--k", o.k)->capture_default_str();
  khop->add_option("--direction", o.direction)->capture_default_str();
  khop->add_flag("--json", o.json, "JSON output");

  auto* paths = app.add_subcommand("paths", "Paths between two entities");
  paths->add_option("--source", o.source)->required();
  paths->add_option("--target", o.target)->required();
  paths->add_option("--max-hops", o.max_hops)->capture_default_str();
  paths->add_option("--direction", o.direction)->capture_default_str();
  paths->add_flag("--json", o.json, "JSON output");

  auto* stats = app.add_subcommand("stats", "Graph statistics");
  stats->add_flag("--json", o.json, "JSON output");

  auto* novelty = app.add_subcommand("novelty", "Fraction of labels absent from reference lists");
  novelty->add_option("--entities", o.entities_file, "Reference entity labels, one per line")->required();
  novelty->add_option("--relations", o.relations_file, "Reference relation labels, one per line")->required();

  auto* exp = app.add_subcommand("export", "Write the published graph as N-Triples");
  exp->add_option("--out", o.out, "Output file, - for stdout");
  exp->add_flag("--all", o.all, "Include every triple regardless of status");

  auto* serve = app.add_subcommand("serve", "Start the HTTP API");
  serve->add_option("--port", o.port)->capture_default_str();
  serve->add_option("--host", o.host)->capture_default_str();
  serve->add_option("--cors-origin", o.cors)->capture_default_str();
  mode_opt(serve);

  auto* review = app.add_subcommand("review", "Record an expert label");
  review->add_option("id", o.triple_id)->required();
  review->add_option("--label", o.label, "expert-factual or expert-non-factual")->required();
  review->add_option("--reviewer", o.reviewer);
  review->add_option("--note", o.note);

  auto* agreement = app.add_subcommand("agreement", "Machine versus expert agreement");
  agreement->add_flag("--json", o.json, "JSON output");

  auto* rebuild = app.add_subcommand("rebuild", "Rebuild graph.nt and sidecar.jsonl from the logs");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    return emit_error(err, "UsageError", e.what(), kExitUsage);
  }

  try {
    if (*ingest) return cmd_ingest(o, out);
    if (*extract) return cmd_extract(o, out);
    if (*validate) return cmd_validate(o, out);
    if (*eval) return cmd_eval(o, out);
    if (*query) return cmd_query(o, out);
    if (*khop) return cmd_khop(o, out);
    if (*paths) return cmd_paths(o, out);
    if (*stats) return cmd_stats(o, out);
    if (*novelty) return cmd_novelty(o, out);
    if (*exp) return cmd_export(o, out);
    if (*serve) return cmd_serve(o, out);
    if (*review) return cmd_review(o, out, err);
    if (*agreement) return cmd_agreement(o, out);
    if (*rebuild) return cmd_rebuild(o, out);
  } catch (const InvalidArgument& e) {
    return emit_error(err, e.kind(), e.what(), kExitUsage);
  } catch (const Error& e) {
    return emit_error(err, e.kind(), e.what(), kExitFailure);
  } catch (const std::exception& e) {
    return emit_error(err, "InternalError", e.what(), kExitFailure);
  }
  return emit_error(err, "UsageError", "no command given", kExitUsage);
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, out, err);
}

}  // namespace asgmkg
