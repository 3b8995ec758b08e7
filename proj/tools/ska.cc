// Copyright 2026 The SKA Authors.
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

// Command-line driver for the annotation workbench. Every subcommand opens
// the store, runs one workspace operation and commits. Exit codes: 0 on
// success, 1 on a domain error, 2 on a usage error.

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ska/corpus_document.h"
#include "ska/error.h"
#include "ska/http_service.h"
#include "ska/serialization.h"
#include "ska/store.h"
#include "ska/text.h"

namespace {

using namespace ska;

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kValidation, "cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_output(const std::string &path, const std::string &content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kValidation, "cannot write " + path);
  out << content;
}

bool is_csv(const std::string &path) {
  return std::filesystem::path(path).extension() == ".csv";
}

std::vector<std::string> split_list(const std::string &value) {
  std::vector<std::string> out;
  std::stringstream in(value);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = std::string(text::trim(item));
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// One concept per line; blank lines and '#' comments are ignored.
std::set<NormalizedConcept> read_concept_list(const std::string &path) {
  std::set<NormalizedConcept> concepts;
  std::istringstream in(read_file(path));
  std::string line;
  while (std::getline(in, line)) {
    const std::string_view value = text::trim(line);
    if (value.empty() || value.front() == '#') continue;
    concepts.insert(normalize(value));
  }
  return concepts;
}

HttpService *g_service = nullptr;

void handle_signal(int) {
  if (g_service) g_service->stop();
}

struct Options {
  std::string store_path = "ska.db";
  std::string config_path;

  std::string file;
  std::string output;
  std::string format;
  std::string id;
  std::string name;
  std::string title;
  std::string round;
  std::string annotator;
  std::string chapter;
  std::string participants;
  std::string lead;
  std::string phase;
  std::string section;
  std::string host = "127.0.0.1";
  size_t min_section_chars = 0;
  double threshold = 0.0;
  int as_of = -1;
  int from = -1;
  int to = -1;
  int port = 8080;
  bool no_finish = false;
  bool list = false;
  bool include_text = true;
};

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"ska: systematic concept annotation workbench"};
  app.require_subcommand(1);
  Options o;
  if (const char *env = std::getenv("SKA_STORE")) o.store_path = env;
  app.add_option("--store", o.store_path, "Store file (default ska.db)");
  app.add_option("--config", o.config_path,
                 "key = value defaults used when the store is created");

  std::function<int(Store &)> action;
  auto on = [&](CLI::App *cmd, std::function<int(Store &)> fn) {
    cmd->callback([&action, fn] { action = fn; });
  };

  auto *init = app.add_subcommand("init", "Create the store, print the admin token");
  on(init, [&](Store &store) {
    std::cout << "admin_token\t" << store.admin_token() << '\n';
    return 0;
  });

  auto *ingest = app.add_subcommand("ingest", "Load a sectioned textbook");
  ingest->add_option("file", o.file, "Heading-structured UTF-8 text")
      ->required();
  ingest->add_option("--min-section-chars", o.min_section_chars,
                     "Merge sections shorter than this");
  ingest->add_option("--id", o.id, "Textbook id");
  ingest->add_option("--title", o.title, "Textbook title");
  on(ingest, [&](Store &store) {
    const std::string raw = read_file(o.file);
    const Json summary = store.mutate([&](Workspace &ws) {
      IngestOptions options;
      if (!o.id.empty()) options.textbook_id = o.id;
      options.title = o.title;
      options.min_section_chars = ingest->count("--min-section-chars")
                                      ? o.min_section_chars
                                      : ws.config().min_section_chars;
      const Textbook &book = ws.ingest(raw, options);
      return Json{{"id", book.id},
                  {"chapters", book.chapters.size()},
                  {"sections", book.section_count()}};
    });
    std::cout << "textbook\t" << summary["id"].get<std::string>() << '\n'
              << "chapters\t" << summary["chapters"] << '\n'
              << "sections\t" << summary["sections"] << '\n';
    return 0;
  });

  auto *annotator = app.add_subcommand("annotator", "Register and list annotators");
  annotator->require_subcommand(1);
  auto *annotator_add = annotator->add_subcommand("add", "Register an annotator");
  annotator_add->add_option("id", o.id)->required();
  annotator_add->add_option("--name", o.name, "Display name");
  on(annotator_add, [&](Store &store) {
    store.mutate([&](Workspace &ws) { ws.add_annotator(o.id, o.name); });
    std::cout << "token\t" << store.issue_token(TokenRole::kAnnotator, o.id)
              << '\n';
    return 0;
  });
  auto *annotator_list = annotator->add_subcommand("list", "List annotators");
  on(annotator_list, [&](Store &store) {
    const Workspace ws = store.load();
    Json list = Json::array();
    for (const auto &[id, a] : ws.state().annotators) {
      list.push_back(to_json(a));
    }
    std::cout << list.dump(2) << '\n';
    return 0;
  });

  auto *qualify = app.add_subcommand("qualify", "Qualification test");
  qualify->require_subcommand(1);
  auto *qualify_set = qualify->add_subcommand("set-test", "Define the gold test");
  qualify_set->add_option("--section", o.section, "Gold section id")->required();
  qualify_set->add_option("--concepts", o.file, "Gold concepts, one per line")
      ->required();
  qualify_set->add_option("--threshold", o.threshold, "Pass mark in (0, 1]");
  on(qualify_set, [&](Store &store) {
    store.mutate([&](Workspace &ws) {
      QualificationTest test;
      test.gold_section_id = o.section;
      test.gold_concepts = read_concept_list(o.file);
      test.threshold = qualify_set->count("--threshold")
                           ? o.threshold
                           : ws.config().qualification_threshold;
      ws.set_qualification_test(std::move(test));
    });
    return 0;
  });
  auto *qualify_run = qualify->add_subcommand("run", "Score a candidate");
  qualify_run->add_option("annotator", o.annotator)->required();
  qualify_run->add_option("--concepts", o.file,
                          "Candidate concepts, one per line")
      ->required();
  on(qualify_run, [&](Store &store) {
    const auto concepts = read_concept_list(o.file);
    const QualificationResult result = store.mutate(
        [&](Workspace &ws) { return ws.qualify(o.annotator, concepts); });
    std::cout << "score\t" << format_number(result.score) << '\n'
              << "passed\t" << (result.passed ? "true" : "false") << '\n';
    return result.passed ? 0 : 1;
  });

  auto *round = app.add_subcommand("round", "Round lifecycle");
  round->require_subcommand(1);
  auto *round_create = round->add_subcommand("create", "Open a round");
  round_create->add_option("--chapter", o.chapter)->required();
  round_create->add_option("--participants", o.participants,
                           "Comma-separated annotator ids")
      ->required();
  round_create->add_option("--lead", o.lead, "Round lead (default: first)");
  on(round_create, [&](Store &store) {
    const Json out = store.mutate([&](Workspace &ws) {
      std::optional<AnnotatorId> lead;
      if (!o.lead.empty()) lead = o.lead;
      return to_json(
          ws.create_round(o.chapter, split_list(o.participants), lead));
    });
    std::cout << out.dump(2) << '\n';
    return 0;
  });
  auto *round_status = round->add_subcommand("status", "Show a round");
  round_status->add_option("round", o.round)->required();
  on(round_status, [&](Store &store) {
    const Workspace ws = store.load();
    const Round &r = ws.round(o.round);
    Json j = to_json(r);
    j["pending"] = r.pending(r.phase);
    std::cout << j.dump(2) << '\n';
    return 0;
  });
  auto *round_list = round->add_subcommand("list", "List rounds");
  on(round_list, [&](Store &store) {
    const Workspace ws = store.load();
    for (const Round &r : ws.state().rounds) {
      std::cout << r.id << '\t' << r.chapter_id << '\t'
                << round_phase_name(r.phase) << '\n';
    }
    return 0;
  });
  auto *round_close = round->add_subcommand("close", "Apply codebook changes and close");
  round_close->add_option("round", o.round)->required();
  round_close->add_option("--as", o.annotator, "Acting round lead")->required();
  round_close->add_option("--rules", o.file, "JSON list of rule changes");
  on(round_close, [&](Store &store) {
    std::vector<CodebookChange> changes;
    if (!o.file.empty()) {
      changes = codebook_changes_from_json(parse_json_text(read_file(o.file)));
    }
    const Json out = store.mutate([&](Workspace &ws) {
      return to_json(ws.close_round(o.round, o.annotator, changes));
    });
    std::cout << out.dump(2) << '\n';
    return 0;
  });

  auto *submit = app.add_subcommand("submit", "Submit initial annotations");
  submit->add_option("--round", o.round)->required();
  submit->add_option("--annotator", o.annotator)->required();
  submit->add_option("--file", o.file, "CSV (section_id,start,end[,surface]) or JSON")
      ->required();
  on(submit, [&](Store &store) {
    const std::string body = read_file(o.file);
    const auto items = is_csv(o.file)
                           ? annotation_inputs_from_csv(body)
                           : annotation_inputs_from_json(parse_json_text(body));
    const Json out = store.mutate([&](Workspace &ws) {
      return to_json(ws.submit_annotations(o.round, o.annotator, items));
    });
    std::cout << "submitted\t" << items.size() << '\n'
              << "phase\t" << out["phase"].get<std::string>() << '\n';
    return 0;
  });

  auto *review = app.add_subcommand("review", "Missed-concept review");
  review->require_subcommand(1);
  auto *review_generate = review->add_subcommand("generate", "Write the review file");
  review_generate->add_option("--round", o.round)->required();
  review_generate->add_option("--reviewer", o.annotator)->required();
  review_generate->add_option("--format", o.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  review_generate->add_option("-o,--output", o.output, "Output file");
  on(review_generate, [&](Store &store) {
    const auto candidates = store.load().review_file(o.round, o.annotator);
    if (o.format == "json") {
      Json list = Json::array();
      for (const auto &c : candidates) list.push_back(to_json(c));
      write_output(o.output, list.dump(2) + "\n");
    } else {
      write_output(o.output, review_csv(candidates));
    }
    return 0;
  });
  auto *review_apply = review->add_subcommand("apply", "Apply review decisions");
  review_apply->add_option("--round", o.round)->required();
  review_apply->add_option("--reviewer", o.annotator)->required();
  review_apply->add_option("--file", o.file,
                           "CSV (section_id,concept,verdict,start,end,rationale) or JSON")
      ->required();
  review_apply->add_flag("--no-finish", o.no_finish,
                         "Record decisions without completing the review");
  on(review_apply, [&](Store &store) {
    const std::string body = read_file(o.file);
    const auto items = is_csv(o.file)
                           ? review_inputs_from_csv(body)
                           : review_inputs_from_json(parse_json_text(body));
    const Json out = store.mutate([&](Workspace &ws) {
      return to_json(ws.apply_review(o.round, o.annotator, items, !o.no_finish));
    });
    std::cout << "decisions\t" << items.size() << '\n'
              << "phase\t" << out["phase"].get<std::string>() << '\n';
    return 0;
  });

  auto *resolve = app.add_subcommand("resolve", "Discussion outcomes");
  resolve->add_option("--round", o.round)->required();
  resolve->add_option("--as", o.annotator, "Acting round lead");
  resolve->add_option("--file", o.file, "JSON list of resolutions");
  resolve->add_flag("--list", o.list, "List the disagreement cases instead");
  on(resolve, [&](Store &store) {
    if (o.list) {
      Json list = Json::array();
      for (const auto &c : store.load().disagreements(o.round)) {
        list.push_back(to_json(c));
      }
      std::cout << list.dump(2) << '\n';
      return 0;
    }
    if (o.annotator.empty() || o.file.empty()) {
      throw CLI::ValidationError("resolve needs --as and --file (or --list)");
    }
    const auto items =
        resolution_inputs_from_json(parse_json_text(read_file(o.file)));
    const Json out = store.mutate([&](Workspace &ws) {
      return to_json(ws.record_resolutions(o.round, o.annotator, items));
    });
    std::cout << "resolutions\t" << items.size() << '\n'
              << "phase\t" << out["phase"].get<std::string>() << '\n';
    return 0;
  });

  auto *agreement = app.add_subcommand("agreement", "Agreement report");
  agreement->add_option("--round", o.round, "Round id (default: every round)");
  agreement->add_option("--phase", o.phase, "before or after")->required();
  agreement->add_option("--format", o.format, "json or csv")
      ->check(CLI::IsMember({"csv", "json"}));
  on(agreement, [&](Store &store) {
    const Workspace ws = store.load();
    const DiscussionPhase phase = parse_discussion_phase(o.phase);
    std::vector<AgreementReport> reports;
    if (!o.round.empty()) {
      reports.push_back(ws.agreement(o.round, phase));
    } else {
      for (const Round &r : ws.state().rounds) {
        reports.push_back(ws.agreement(r.id, phase));
      }
    }
    if (o.format == "csv") {
      std::cout << agreement_csv(reports);
    } else if (reports.size() == 1 && !o.round.empty()) {
      std::cout << to_json(reports.front()).dump(2) << '\n';
    } else {
      Json list = Json::array();
      for (const auto &r : reports) list.push_back(to_json(r));
      std::cout << list.dump(2) << '\n';
    }
    return 0;
  });

  auto *stats = app.add_subcommand("stats", "N-gram statistics table");
  stats->add_option("--format", o.format, "text, csv or json")
      ->check(CLI::IsMember({"text", "csv", "json"}));
  stats->add_option("--from", o.from, "First round index");
  stats->add_option("--to", o.to, "Last round index");
  on(stats, [&](Store &store) {
    const Workspace ws = store.load();
    std::optional<int> from, to;
    if (o.from >= 0) from = o.from;
    if (o.to >= 0) to = o.to;
    const CorpusStatsTable table = ws.stats(from, to);
    if (o.format == "csv") {
      std::cout << stats_csv(table);
    } else if (o.format == "json") {
      std::cout << to_json(table).dump(2) << '\n';
    } else {
      std::cout << stats_text(table);
    }
    const uint64_t beyond = std::max(table.unique_after.beyond_six,
                                     table.unique_before.beyond_six);
    if (beyond > 0) {
      std::cerr << "warning: " << beyond
                << " concept(s) longer than 6 grams counted under 5+6\n";
    }
    return 0;
  });

  auto *codebook = app.add_subcommand("codebook", "Code book");
  codebook->require_subcommand(1);
  auto *codebook_show = codebook->add_subcommand("show", "Print the code book");
  codebook_show->add_option("--as-of", o.as_of, "Round index");
  codebook_show->add_option("--format", o.format, "markdown or json")
      ->check(CLI::IsMember({"markdown", "json"}));
  auto *codebook_export = codebook->add_subcommand("export", "Write the code book");
  codebook_export->add_option("--format", o.format, "markdown or json")
      ->check(CLI::IsMember({"markdown", "json"}));
  codebook_export->add_option("-o,--output", o.output, "Output file");
  auto print_codebook = [&](Store &store) {
    const Workspace ws = store.load();
    std::optional<int> as_of;
    if (o.as_of >= 0) as_of = o.as_of;
    if (o.format == "json") {
      const Json j = as_of ? to_json(ws.codebook().version_at(*as_of))
                           : codebook_json(ws.codebook());
      write_output(o.output, j.dump(2) + "\n");
    } else {
      write_output(o.output, codebook_markdown(ws.codebook(), as_of));
    }
    return 0;
  };
  on(codebook_show, print_codebook);
  on(codebook_export, print_codebook);
  auto *codebook_seed = codebook->add_subcommand("seed", "Add round-0 rules");
  codebook_seed->add_option("--file", o.file, "JSON list of rules")->required();
  on(codebook_seed, [&](Store &store) {
    const auto rules =
        codebook_changes_from_json(parse_json_text(read_file(o.file)));
    store.mutate([&](Workspace &ws) { ws.seed_rules(rules); });
    std::cout << "seeded\t" << rules.size() << '\n';
    return 0;
  });
  auto *codebook_convergence =
      codebook->add_subcommand("convergence", "Rules added per round");
  on(codebook_convergence, [&](Store &store) {
    std::cout << to_json(store.load().convergence()).dump(2) << '\n';
    return 0;
  });

  auto *export_cmd = app.add_subcommand("export", "Export the corpus document");
  export_cmd->add_option("--include-text", o.include_text,
                         "Include section bodies and spans (default true)");
  export_cmd->add_option("--phase", o.phase, "all, before or after")
      ->check(CLI::IsMember({"all", "before", "after"}));
  export_cmd->add_option("-o,--output", o.output, "Output file");
  on(export_cmd, [&](Store &store) {
    ExportOptions options;
    options.include_text = o.include_text;
    if (!o.phase.empty() && o.phase != "all") {
      options.phase_filter = parse_discussion_phase(o.phase);
    }
    write_output(o.output, export_corpus_text(store.load(), options));
    return 0;
  });

  auto *import_cmd = app.add_subcommand("import", "Replace state from a corpus document");
  import_cmd->add_option("file", o.file)->required();
  on(import_cmd, [&](Store &store) {
    Workspace imported = import_corpus(parse_json_text(read_file(o.file)));
    store.commit(imported, store.version());
    std::cout << "imported\t" << o.file << '\n';
    return 0;
  });

  auto *validate = app.add_subcommand("validate", "Full integrity scan");
  on(validate, [&](Store &store) {
    const auto problems = store.load().integrity_problems();
    for (const auto &p : problems) std::cout << "problem\t" << p << '\n';
    std::cout << (problems.empty() ? "ok\n" : "failed\n");
    return problems.empty() ? 0 : 1;
  });

  auto *tokens = app.add_subcommand("tokens", "List bearer tokens");
  on(tokens, [&](Store &store) {
    for (const TokenGrant &grant : store.tokens()) {
      std::cout << (grant.role == TokenRole::kAdmin ? "admin" : "annotator")
                << '\t' << grant.subject << '\t' << grant.token << '\n';
    }
    return 0;
  });

  auto *serve = app.add_subcommand("serve", "Run the HTTP API");
  serve->add_option("--host", o.host);
  serve->add_option("--port", o.port);
  on(serve, [&](Store &store) {
    HttpService service(store);
    const int port = service.bind(o.host, o.port);
    std::cerr << "listening on " << o.host << ':' << port << '\n';
    g_service = &service;
    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);
    service.listen();
    g_service = nullptr;
    return 0;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    StudyConfig config;
    if (!o.config_path.empty()) {
      config = parse_config(read_file(o.config_path));
    }
    Store store = Store::open(o.store_path, config);
    return action(store);
  } catch (const CLI::ValidationError &e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const Error &e) {
    std::cerr << "error (" << error_kind_name(e.kind()) << "): " << e.what()
              << '\n';
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
