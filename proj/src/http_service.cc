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

#include "ska/http_service.h"

#include <httplib.h>

#include <functional>
#include <mutex>

#include "ska/corpus_document.h"
#include "ska/serialization.h"

namespace ska {

namespace {

struct HttpFailure {
  int status;
  std::string kind;
  std::string message;
};

void send_json(httplib::Response &res, int status, const Json &body) {
  res.status = status;
  res.set_content(body.dump(2) + "\n", "application/json");
}

void send_error(httplib::Response &res, int status, std::string_view kind,
                const std::string &message) {
  send_json(res, status,
            {{"error", {{"kind", kind}, {"message", message}}}});
}

Json request_json(const httplib::Request &req) {
  if (req.body.empty()) return Json::object();
  return parse_json_text(req.body);
}

std::optional<int> int_param(const httplib::Request &req, const char *name) {
  if (!req.has_param(name) || req.get_param_value(name).empty()) {
    return std::nullopt;
  }
  const std::string value = req.get_param_value(name);
  try {
    size_t used = 0;
    const int parsed = std::stoi(value, &used);
    if (used == value.size()) return parsed;
  } catch (const std::logic_error &) {
  }
  throw Error(ErrorKind::kValidation,
              std::string("query parameter '") + name + "' must be an integer");
}

bool bool_param(const httplib::Request &req, const char *name,
                bool fallback) {
  if (!req.has_param(name)) return fallback;
  const std::string value = req.get_param_value(name);
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw Error(ErrorKind::kValidation,
              std::string("query parameter '") + name + "' must be a boolean");
}

}  // namespace

int http_status(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kPhase:
    case ErrorKind::kConflict:
    case ErrorKind::kNotADisagreement:
    case ErrorKind::kIncompleteData:
      return 409;
    case ErrorKind::kAuthorization:
      return 403;
    case ErrorKind::kNotFound:
      return 404;
    default:
      return 422;
  }
}

struct HttpService::Impl {
  explicit Impl(Store &s) : store(s) {}

  Store &store;
  httplib::Server server;
  std::mutex mutex;
  std::optional<Workspace> cached;
  uint64_t cached_version = 0;

  // Caller holds the mutex.
  const Workspace &current() {
    const uint64_t version = store.version();
    if (!cached || cached_version != version) {
      cached = store.load();
      cached_version = version;
    }
    return *cached;
  }

  template <typename Fn>
  auto read(Fn &&fn) {
    std::lock_guard lock(mutex);
    return fn(current());
  }

  // Applies a mutation to a copy and commits it; the cache only moves
  // forward once the commit succeeds.
  template <typename Fn>
  auto write(Fn &&fn) {
    std::lock_guard lock(mutex);
    Workspace next = current();
    auto result = fn(next);
    cached_version = store.commit(next, cached_version);
    cached = std::move(next);
    return result;
  }

  TokenGrant authenticate(const httplib::Request &req) {
    const std::string header = req.get_header_value("Authorization");
    const std::string prefix = "Bearer ";
    if (header.rfind(prefix, 0) != 0) {
      throw HttpFailure{401, "unauthenticated", "missing bearer token"};
    }
    auto grant = store.find_token(header.substr(prefix.size()));
    if (!grant) throw HttpFailure{401, "unauthenticated", "unknown token"};
    return *grant;
  }

  void require_admin(const httplib::Request &req) {
    if (authenticate(req).role != TokenRole::kAdmin) {
      throw Error(ErrorKind::kAuthorization, "admin token required");
    }
  }

  // The annotator the token speaks for.
  AnnotatorId acting_annotator(const httplib::Request &req) {
    const TokenGrant grant = authenticate(req);
    if (grant.role != TokenRole::kAnnotator) {
      throw Error(ErrorKind::kAuthorization,
                  "this route needs an annotator token");
    }
    return grant.subject;
  }

  void require_self_or_admin(const httplib::Request &req,
                             const AnnotatorId &annotator) {
    const TokenGrant grant = authenticate(req);
    if (grant.role == TokenRole::kAdmin) return;
    if (grant.subject != annotator) {
      throw Error(ErrorKind::kAuthorization,
                  "token does not belong to '" + annotator + "'");
    }
  }

  using Handler =
      std::function<void(const httplib::Request &, httplib::Response &)>;

  // Wraps a handler with the error mapping.
  static httplib::Server::Handler guarded(Handler handler) {
    return [handler = std::move(handler)](const httplib::Request &req,
                                          httplib::Response &res) {
      try {
        handler(req, res);
      } catch (const HttpFailure &f) {
        send_error(res, f.status, f.kind, f.message);
      } catch (const Error &e) {
        send_error(res, http_status(e.kind()), error_kind_name(e.kind()),
                   e.what());
      } catch (const nlohmann::json::exception &e) {
        send_error(res, 422, error_kind_name(ErrorKind::kFormat), e.what());
      } catch (const std::exception &e) {
        send_error(res, 500, "internal", e.what());
      }
    };
  }

  Json round_view(const Workspace &ws, const Round &round) {
    Json j = to_json(round);
    j["pending"] = round.pending(round.phase);
    (void)ws;
    return j;
  }

  void check_expected_version(const Json &body, const Round &round) {
    if (body.is_object() && body.contains("expected_version") &&
        !body.at("expected_version").is_null() &&
        body.at("expected_version").get<uint64_t>() != round.version) {
      throw Error(ErrorKind::kConflict,
                  "round '" + round.id + "' is at version " +
                      std::to_string(round.version));
    }
  }

  void routes() {
    server.Get("/healthz", guarded([](const auto &, auto &res) {
                 send_json(res, 200,
                           {{"status", "ok"},
                            {"service", "ska"},
                            {"version", kServiceVersion},
                            {"format_version", kCorpusFormatVersion}});
               }));

    server.Post("/textbooks", guarded([this](const auto &req, auto &res) {
                  require_admin(req);
                  const Json body = request_json(req);
                  const std::string raw = body.value("text", std::string());
                  Json out = write([&](Workspace &ws) {
                    IngestOptions options;
                    options.textbook_id =
                        body.value("id", std::string("textbook"));
                    options.title = body.value("title", std::string());
                    options.min_section_chars = body.value(
                        "min_section_chars", ws.config().min_section_chars);
                    return to_json(ws.ingest(raw, options), true);
                  });
                  send_json(res, 201, out);
                }));

    server.Get(R"(/textbooks/([^/]+))",
               guarded([this](const auto &req, auto &res) {
                 const std::string id = req.matches[1];
                 send_json(res, 200, read([&](const Workspace &ws) {
                             const Textbook &book = ws.textbook();
                             if (book.id != id) {
                               throw Error(ErrorKind::kNotFound,
                                           "unknown textbook '" + id + "'");
                             }
                             return to_json(book, true);
                           }));
               }));

    server.Post("/annotators", guarded([this](const auto &req, auto &res) {
                  require_admin(req);
                  const Json body = request_json(req);
                  const std::string id = body.value("id", std::string());
                  Json annotator = write([&](Workspace &ws) {
                    return to_json(ws.add_annotator(
                        id, body.value("display_name", std::string())));
                  });
                  const std::string token =
                      store.issue_token(TokenRole::kAnnotator, id);
                  send_json(res, 201,
                            {{"annotator", annotator}, {"token", token}});
                }));

    server.Get("/annotators", guarded([this](const auto &, auto &res) {
                 send_json(res, 200, read([](const Workspace &ws) {
                             Json list = Json::array();
                             for (const auto &[id, a] : ws.state().annotators) {
                               list.push_back(to_json(a));
                             }
                             return list;
                           }));
               }));

    server.Post("/qualification-test",
                guarded([this](const auto &req, auto &res) {
                  require_admin(req);
                  const Json body = request_json(req);
                  Json out = write([&](Workspace &ws) {
                    Json j = body;
                    if (!j.contains("threshold")) {
                      j["threshold"] = ws.config().qualification_threshold;
                    }
                    QualificationTest test = qualification_test_from_json(j);
                    ws.set_qualification_test(test);
                    return to_json(test);
                  });
                  send_json(res, 200, out);
                }));

    server.Post(R"(/annotators/([^/]+)/qualify)",
                guarded([this](const auto &req, auto &res) {
                  const std::string id = req.matches[1];
                  require_self_or_admin(req, id);
                  const Json body = request_json(req);
                  std::set<NormalizedConcept> concepts;
                  for (const auto &value :
                       body.value("concepts", std::vector<std::string>())) {
                    concepts.insert(normalize(value));
                  }
                  const QualificationResult result = write(
                      [&](Workspace &ws) { return ws.qualify(id, concepts); });
                  send_json(res, 200,
                            {{"annotator", id},
                             {"score", result.score},
                             {"passed", result.passed}});
                }));

    server.Post("/codebook/seed", guarded([this](const auto &req, auto &res) {
                  require_admin(req);
                  const auto rules =
                      codebook_changes_from_json(request_json(req));
                  Json out = write([&](Workspace &ws) {
                    ws.seed_rules(rules);
                    return codebook_json(ws.codebook());
                  });
                  send_json(res, 201, out);
                }));

    server.Post("/rounds", guarded([this](const auto &req, auto &res) {
                  require_admin(req);
                  const Json body = request_json(req);
                  std::optional<AnnotatorId> lead;
                  if (body.contains("lead")) lead = body.at("lead");
                  Json out = write([&](Workspace &ws) {
                    const Round &round = ws.create_round(
                        body.value("chapter_id", std::string()),
                        body.value("participants",
                                   std::vector<std::string>()),
                        lead);
                    return round_view(ws, round);
                  });
                  send_json(res, 201, out);
                }));

    server.Get("/rounds", guarded([this](const auto &, auto &res) {
                 send_json(res, 200, read([this](const Workspace &ws) {
                             Json list = Json::array();
                             for (const Round &r : ws.state().rounds) {
                               list.push_back(round_view(ws, r));
                             }
                             return list;
                           }));
               }));

    server.Get(R"(/rounds/([^/]+))",
               guarded([this](const auto &req, auto &res) {
                 const std::string id = req.matches[1];
                 send_json(res, 200, read([&](const Workspace &ws) {
                             return round_view(ws, ws.round(id));
                           }));
               }));

    // Peers' annotations stay hidden from annotators while the round is
    // still Annotating.
    server.Get(R"(/rounds/([^/]+)/annotations)",
               guarded([this](const auto &req, auto &res) {
                 const std::string id = req.matches[1];
                 const TokenGrant grant = authenticate(req);
                 send_json(res, 200, read([&](const Workspace &ws) {
                             const Round &round = ws.round(id);
                             const bool own_only =
                                 grant.role == TokenRole::kAnnotator &&
                                 round.phase == RoundPhase::kAnnotating;
                             Json list = Json::array();
                             for (const auto &a : ws.state().annotations) {
                               if (a.round_id != id) continue;
                               if (own_only && a.annotator_id != grant.subject) {
                                 continue;
                               }
                               list.push_back(to_json(a, true));
                             }
                             return Json{{"round", id},
                                         {"phase", round_phase_name(round.phase)},
                                         {"annotations", list}};
                           }));
               }));

    server.Post(
        R"(/rounds/([^/]+)/submit/([^/]+))",
        guarded([this](const auto &req, auto &res) {
          const std::string id = req.matches[1];
          const RoundPhase phase = parse_round_phase(req.matches[2].str());
          const AnnotatorId actor = acting_annotator(req);
          const Json body = request_json(req);
          Json out = write([&](Workspace &ws) {
            check_expected_version(body, ws.round(id));
            // The URL names the phase the client believes is current; the
            // payload kind follows from it and the round rejects mismatches.
            switch (phase) {
              case RoundPhase::kAnnotating:
                return round_view(ws, ws.submit_annotations(
                                          id, actor,
                                          annotation_inputs_from_json(body)));
              case RoundPhase::kMissedReview:
                return round_view(
                    ws, ws.apply_review(id, actor,
                                        review_inputs_from_json(body), true));
              case RoundPhase::kDiscussion:
                return round_view(ws, ws.record_resolutions(
                                          id, actor,
                                          resolution_inputs_from_json(body)));
              case RoundPhase::kCodebookUpdate:
                return round_view(
                    ws, ws.close_round(id, actor,
                                       codebook_changes_from_json(body)));
              case RoundPhase::kClosed:
                break;
            }
            throw Error(ErrorKind::kPhase, "nothing can be submitted to closed");
          });
          send_json(res, 200, out);
        }));

    server.Get(R"(/rounds/([^/]+)/review/([^/]+))",
               guarded([this](const auto &req, auto &res) {
                 const std::string id = req.matches[1];
                 const std::string reviewer = req.matches[2];
                 const auto candidates = read([&](const Workspace &ws) {
                   return ws.review_file(id, reviewer);
                 });
                 if (req.get_param_value("format") == "csv") {
                   res.status = 200;
                   res.set_content(review_csv(candidates), "text/csv");
                   return;
                 }
                 Json list = Json::array();
                 for (const auto &c : candidates) list.push_back(to_json(c));
                 send_json(res, 200, {{"candidates", list}});
               }));

    server.Post(R"(/rounds/([^/]+)/review/([^/]+))",
                guarded([this](const auto &req, auto &res) {
                  const std::string id = req.matches[1];
                  const std::string reviewer = req.matches[2];
                  if (acting_annotator(req) != reviewer) {
                    throw Error(ErrorKind::kAuthorization,
                                "decisions belong to the acting reviewer");
                  }
                  const Json body = request_json(req);
                  const bool finish = body.is_object() &&
                                      body.value("finish", false);
                  Json out = write([&](Workspace &ws) {
                    check_expected_version(body, ws.round(id));
                    return round_view(
                        ws, ws.apply_review(id, reviewer,
                                            review_inputs_from_json(body),
                                            finish));
                  });
                  send_json(res, 200, out);
                }));

    server.Get(R"(/rounds/([^/]+)/disagreements)",
               guarded([this](const auto &req, auto &res) {
                 const std::string id = req.matches[1];
                 send_json(res, 200, read([&](const Workspace &ws) {
                             Json list = Json::array();
                             for (const auto &c : ws.disagreements(id)) {
                               list.push_back(to_json(c));
                             }
                             return Json{{"round", id}, {"cases", list}};
                           }));
               }));

    server.Post(R"(/rounds/([^/]+)/resolutions)",
                guarded([this](const auto &req, auto &res) {
                  const std::string id = req.matches[1];
                  const AnnotatorId actor = acting_annotator(req);
                  const Json body = request_json(req);
                  Json out = write([&](Workspace &ws) {
                    check_expected_version(body, ws.round(id));
                    return round_view(
                        ws, ws.record_resolutions(
                                id, actor, resolution_inputs_from_json(body)));
                  });
                  send_json(res, 200, out);
                }));

    server.Post(R"(/rounds/([^/]+)/close)",
                guarded([this](const auto &req, auto &res) {
                  const std::string id = req.matches[1];
                  const AnnotatorId actor = acting_annotator(req);
                  const Json body = request_json(req);
                  Json out = write([&](Workspace &ws) {
                    check_expected_version(body, ws.round(id));
                    return round_view(
                        ws, ws.close_round(id, actor,
                                           codebook_changes_from_json(body)));
                  });
                  send_json(res, 200, out);
                }));

    server.Get(R"(/rounds/([^/]+)/agreement)",
               guarded([this](const auto &req, auto &res) {
                 const std::string id = req.matches[1];
                 const DiscussionPhase phase = parse_discussion_phase(
                     req.has_param("phase") ? req.get_param_value("phase")
                                            : "before");
                 const AgreementReport report = read([&](const Workspace &ws) {
                   return ws.agreement(id, phase);
                 });
                 if (req.get_param_value("format") == "csv") {
                   res.status = 200;
                   res.set_content(agreement_csv({report}), "text/csv");
                   return;
                 }
                 send_json(res, 200, to_json(report));
               }));

    server.Get("/codebook", guarded([this](const auto &req, auto &res) {
                 const std::optional<int> as_of = int_param(req, "as_of_round");
                 const std::string format = req.get_param_value("format");
                 read([&](const Workspace &ws) {
                   if (format == "markdown") {
                     res.status = 200;
                     res.set_content(codebook_markdown(ws.codebook(), as_of),
                                     "text/markdown");
                   } else if (as_of) {
                     if (*as_of < 0) {
                       throw Error(ErrorKind::kValidation,
                                   "as_of_round must be non-negative");
                     }
                     send_json(res, 200,
                               to_json(ws.codebook().version_at(*as_of)));
                   } else {
                     Json j = codebook_json(ws.codebook());
                     j["convergence"] = to_json(ws.convergence());
                     send_json(res, 200, j);
                   }
                   return 0;
                 });
               }));

    server.Get("/stats/table", guarded([this](const auto &req, auto &res) {
                 const auto from = int_param(req, "from");
                 const auto to = int_param(req, "to");
                 const CorpusStatsTable table = read(
                     [&](const Workspace &ws) { return ws.stats(from, to); });
                 const std::string format = req.get_param_value("format");
                 res.status = 200;
                 if (format == "csv") {
                   res.set_content(stats_csv(table), "text/csv");
                 } else if (format == "text") {
                   res.set_content(stats_text(table), "text/plain");
                 } else {
                   send_json(res, 200, to_json(table));
                 }
               }));

    server.Get("/export", guarded([this](const auto &req, auto &res) {
                 ExportOptions options;
                 options.include_text = bool_param(req, "include_text", true);
                 const std::string phase = req.get_param_value("phase");
                 if (!phase.empty() && phase != "all") {
                   options.phase_filter = parse_discussion_phase(phase);
                 }
                 res.status = 200;
                 res.set_content(read([&](const Workspace &ws) {
                                   return export_corpus_text(ws, options);
                                 }),
                                 "application/json");
               }));

    server.Post("/import", guarded([this](const auto &req, auto &res) {
                  require_admin(req);
                  Workspace imported = import_corpus(request_json(req));
                  std::lock_guard lock(mutex);
                  const uint64_t version = store.version();
                  cached_version = store.commit(imported, version);
                  cached = std::move(imported);
                  send_json(res, 200, {{"imported", true},
                                       {"state_version", cached_version}});
                }));

    server.Get("/validate", guarded([this](const auto &, auto &res) {
                 const auto problems = read([](const Workspace &ws) {
                   return ws.integrity_problems();
                 });
                 send_json(res, 200,
                           {{"ok", problems.empty()}, {"problems", problems}});
               }));
  }
};

HttpService::HttpService(Store &store) : impl_(std::make_unique<Impl>(store)) {
  impl_->routes();
}

HttpService::~HttpService() { stop(); }

int HttpService::bind(const std::string &host, int port) {
  const int bound = port == 0 ? impl_->server.bind_to_any_port(host)
                              : (impl_->server.bind_to_port(host, port) ? port
                                                                        : -1);
  if (bound < 0) {
    throw std::runtime_error("cannot bind " + host + ":" +
                             std::to_string(port));
  }
  return bound;
}

void HttpService::listen() { impl_->server.listen_after_bind(); }

void HttpService::stop() {
  if (impl_) impl_->server.stop();
}

bool HttpService::running() const { return impl_->server.is_running(); }

}  // namespace ska
