#include "modelforge/api/server.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace modelforge::api {

using nlohmann::json;

namespace {

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    auto j = json::parse(req.body);
    if (!j.is_object()) throw ApiError(ApiError::Code::MalformedRequest, "request body must be a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    throw ApiError(ApiError::Code::MalformedRequest, std::string("request body is not JSON: ") + e.what());
  }
}

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void reply_error(httplib::Response& res, const ApiError& e) {
  json body{{"error", error_code_name(e.code())}, {"message", e.what()}};
  if (e.code() == ApiError::Code::InvalidEdit || e.code() == ApiError::Code::CEParseError) {
    body["position"] = e.position();
    if (!e.expected().empty()) body["expected"] = e.expected();
  }
  reply(res, http_status(e.code()), body);
}

std::vector<std::filesystem::path> paths(const json& body) {
  if (!body.contains("paths") || !body["paths"].is_array() || body["paths"].empty())
    throw ApiError(ApiError::Code::MalformedRequest, "'paths' must be a non-empty array");
  std::vector<std::filesystem::path> out;
  for (const auto& p : body["paths"]) out.emplace_back(p.get<std::string>());
  return out;
}

std::string json_term(const kg::Term& t) {
  if (const auto* iri = std::get_if<kg::Iri>(&t)) return iri->str();
  return std::get<kg::Literal>(t).lexical;
}

kg::PatternTerm pattern_term(const json& j) {
  if (!j.is_string()) throw kg::KgError(kg::KgError::Code::MalformedQuery, "pattern terms must be strings");
  return kg::parse_pattern_term(j.get<std::string>());
}

kg::PatternQuery query_from_json(const json& body) {
  kg::PatternQuery q;
  const json& pats = body.value("patterns", json());
  if (!pats.is_array() || pats.empty())
    throw kg::KgError(kg::KgError::Code::MalformedQuery, "'patterns' must be a non-empty array of [s, p, o]");
  for (const auto& p : pats) {
    if (!p.is_array() || p.size() != 3) throw kg::KgError(kg::KgError::Code::MalformedQuery, "a pattern is [s, p, o]");
    kg::TriplePattern tp{pattern_term(p[0]), pattern_term(p[1]), pattern_term(p[2])};
    if (std::holds_alternative<kg::Literal>(tp.subject) || std::holds_alternative<kg::Literal>(tp.predicate))
      throw kg::KgError(kg::KgError::Code::MalformedQuery, "literal in subject or predicate position");
    q.patterns.push_back(std::move(tp));
  }
  for (const auto& f : body.value("filters", json::array())) {
    if (!f.is_object() || !f.contains("var") || !f.contains("op") || !f.contains("value"))
      throw kg::KgError(kg::KgError::Code::MalformedQuery, "a filter is {var, op, value}");
    auto op = kg::parse_filter_op(f["op"].get<std::string>());
    if (!op) throw kg::KgError(kg::KgError::Code::MalformedQuery, "unknown filter operator " + f["op"].dump());
    std::string var = f["var"].get<std::string>();
    if (!var.empty() && var[0] == '?') var.erase(0, 1);
    kg::Filter filter{var, *op, kg::Variable{}};
    auto v = pattern_term(f["value"]);
    if (auto* x = std::get_if<kg::Variable>(&v)) filter.operand = *x;
    else if (auto* i = std::get_if<kg::Iri>(&v)) filter.operand = kg::Term(*i);
    else filter.operand = kg::Term(std::get<kg::Literal>(v));
    q.filters.push_back(std::move(filter));
  }
  return q;
}

eqc::Bindings bindings_from_json(const json& j) {
  eqc::Bindings b;
  if (!j.is_object()) throw ApiError(ApiError::Code::MalformedRequest, "'bindings' must be an object of numbers");
  for (const auto& [k, v] : j.items()) {
    if (!v.is_number()) throw ApiError(ApiError::Code::MalformedRequest, "binding " + k + " is not a number");
    b[k] = v.get<double>();
  }
  return b;
}

json plan_json(const ComputeResult& r) {
  json steps = json::array();
  for (const auto& s : r.plan.steps) {
    json inputs = json::object();
    for (const auto& [t, src] : s.bindings) inputs[t.str()] = src.given() ? json("given") : json(*src.step);
    steps.push_back({{"model", s.card.model.str()}, {"function", s.card.fn.name},
                     {"output", s.card.output.augmented_type ? s.card.output.augmented_type->concept_iri.str() : ""},
                     {"inputs", inputs}});
  }
  json values = json::object();
  for (const auto& [k, v] : r.values) values[k.str()] = v;
  return {{"target", r.plan.target.str()}, {"value", r.value}, {"steps", steps}, {"values", values}};
}

}  // namespace

struct Server::Impl {
  Workbench& wb;
  httplib::Server http;

  explicit Impl(Workbench& w) : wb(w) { routes(); }

  using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

  // Every handler maps ApiError to its status and JSON body.
  static httplib::Server::Handler guarded(Handler h) {
    return [h = std::move(h)](const httplib::Request& req, httplib::Response& res) {
      try {
        h(req, res);
      } catch (const ApiError& e) {
        reply_error(res, e);
      } catch (const kg::KgError& e) {
        reply_error(res, ApiError(e.code() == kg::KgError::Code::MalformedQuery || e.code() == kg::KgError::Code::UnknownPrefix ||
                                          e.code() == kg::KgError::Code::InvalidTerm
                                      ? ApiError::Code::MalformedQuery
                                      : ApiError::Code::MalformedRequest,
                                  e.what()));
      } catch (const json::exception& e) {
        reply_error(res, ApiError(ApiError::Code::MalformedRequest, e.what()));
      }
    };
  }

  void routes() {
    http.Get("/health", guarded([](const httplib::Request&, httplib::Response& res) { reply(res, 200, {{"status", "ok"}, {"version", kVersion}}); }));

    http.Post("/ingest/text", guarded([this](const httplib::Request& req, httplib::Response& res) {
      json body = parse_body(req);
      reply(res, 202, {{"job", wb.submit_text(paths(body))}});
    }));
    http.Post("/ingest/code", guarded([this](const httplib::Request& req, httplib::Response& res) {
      json body = parse_body(req);
      auto ignore = body.value("ignoreClasses", std::vector<std::string>{});
      reply(res, 202, {{"job", wb.submit_code(paths(body), ignore)}});
    }));
    http.Get("/jobs/:id", guarded([this](const httplib::Request& req, httplib::Response& res) { reply(res, 200, to_json(wb.job(req.path_params.at("id")))); }));

    http.Get("/curation/pending", guarded([this](const httplib::Request& req, httplib::Response& res) {
      std::optional<ItemKind> kind;
      if (req.has_param("kind")) {
        kind = parse_kind(req.get_param_value("kind"));
        if (!kind) throw ApiError(ApiError::Code::MalformedRequest, "unknown kind " + req.get_param_value("kind"));
      }
      json items = json::array();
      for (const auto& it : wb.items(kind, ItemStatus::Pending)) items.push_back(to_json(it));
      reply(res, 200, {{"items", items}});
    }));
    http.Get("/curation/:id", guarded([this](const httplib::Request& req, httplib::Response& res) { reply(res, 200, to_json(wb.item(req.path_params.at("id")))); }));
    http.Post("/curation/:id/accept",
              guarded([this](const httplib::Request& req, httplib::Response& res) { reply(res, 200, to_json(wb.accept(req.path_params.at("id")))); }));
    http.Post("/curation/:id/reject", guarded([this](const httplib::Request& req, httplib::Response& res) {
      json body = parse_body(req);
      reply(res, 200, to_json(wb.reject(req.path_params.at("id"), body.value("reason", ""))));
    }));
    http.Post("/curation/:id/edit", guarded([this](const httplib::Request& req, httplib::Response& res) {
      json body = parse_body(req);
      if (!body.contains("payload")) throw ApiError(ApiError::Code::MalformedRequest, "'payload' is required");
      reply(res, 200, to_json(wb.edit(req.path_params.at("id"), body["payload"])));
    }));

    http.Get("/equations", guarded([this](const httplib::Request& req, httplib::Response& res) {
      std::string status = req.has_param("status") ? req.get_param_value("status") : "";
      json eqs = json::array();
      for (const auto& r : wb.equations(status == "committed")) {
        if (status.empty() || status == "committed" || status_name(r.status) == status) eqs.push_back(to_json(r));
      }
      reply(res, 200, {{"equations", eqs}});
    }));
    http.Get("/equations/:id", guarded([this](const httplib::Request& req, httplib::Response& res) { reply(res, 200, to_json(wb.equation(req.path_params.at("id")))); }));
    http.Post("/equations/:id/eval", guarded([this](const httplib::Request& req, httplib::Response& res) {
      json body = parse_body(req);
      auto r = wb.evaluate(req.path_params.at("id"), bindings_from_json(body.value("bindings", json::object())));
      reply(res, 200, {{"function", r.function}, {"output", r.output}, {"value", r.value}});
    }));

    http.Post("/query", guarded([this](const httplib::Request& req, httplib::Response& res) {
      json body;
      try {
        body = parse_body(req);
      } catch (const ApiError& e) {
        throw ApiError(ApiError::Code::MalformedQuery, e.what());
      }
      std::vector<kg::Iri> graphs;
      for (const auto& g : body.value("graphs", json::array())) graphs.push_back(kg::Iri::parse(g.get<std::string>()));
      auto result = wb.query(query_from_json(body), graphs);
      json rows = json::array();
      for (const auto& row : result.rows) {
        json r = json::array();
        for (const auto& t : row) r.push_back(json_term(t));
        rows.push_back(r);
      }
      reply(res, 200, {{"variables", result.variables}, {"rows", rows}});
    }));

    http.Post("/compose", guarded([this](const httplib::Request& req, httplib::Response& res) {
      json body = parse_body(req);
      auto name = body.at("target").get<std::string>();
      auto target = wb.resolve_concept(name);
      if (!target) throw ApiError(ApiError::Code::UnknownConcept, "unknown concept '" + name + "'");
      compose::Quantities given;
      const json given_json = body.value("given", json::object());
      for (const auto& [k, v] : given_json.items()) {
        auto c = wb.resolve_concept(k);
        if (!c) c = wb.resolve_variable(k);
        if (!c) throw ApiError(ApiError::Code::UnknownConcept, "unknown concept '" + k + "'");
        if (!v.is_number()) throw ApiError(ApiError::Code::MalformedRequest, "given " + k + " is not a number");
        given[*c] = v.get<double>();
      }
      reply(res, 200, plan_json(wb.compute(*target, given)));
    }));

    http.Get("/concepts", guarded([this](const httplib::Request&, httplib::Response& res) {
      json out = json::array();
      auto dict = wb.dictionary();
      for (const auto& e : dict.entries()) {
        out.push_back({{"iri", e.canonical.str()}, {"name", e.preferred_name}, {"variants", e.variants}, {"units", e.units}});
      }
      reply(res, 200, {{"concepts", out}});
    }));
    http.Post("/concepts", guarded([this](const httplib::Request& req, httplib::Response& res) {
      json body = parse_body(req);
      if (!body.contains("name") || !body["name"].is_string())
        throw ApiError(ApiError::Code::MalformedRequest, "'name' is required");
      auto aliases = body.value("aliases", std::vector<std::string>{});
      reply(res, 201, to_json(wb.add_concept(body["name"].get<std::string>(), aliases)));
    }));

    http.set_exception_handler([](const auto&, auto& res, std::exception_ptr ep) {
      std::string msg = "internal error";
      try {
        std::rethrow_exception(ep);
      } catch (const std::exception& e) {
        msg = e.what();
      } catch (...) {
      }
      reply(res, 500, {{"error", "Internal"}, {"message", msg}});
    });
  }
};

Server::Server(Workbench& wb) : impl_(std::make_unique<Impl>(wb)) {}
Server::~Server() { stop(); }

int Server::bind(const std::string& host, int port) {
  // The default options set SO_REUSEPORT, which would let a second server
  // share a port that is already taken.
  impl_->http.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
  });
  int bound = port;
  if (port == 0) {
    bound = impl_->http.bind_to_any_port(host);
    if (bound < 0) bound = 0;
  } else if (!impl_->http.bind_to_port(host, port)) {
    bound = 0;
  }
  if (bound <= 0) throw ApiError(ApiError::Code::BindFailure, "cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

void Server::run() { impl_->http.listen_after_bind(); }

void Server::stop() {
  if (impl_) impl_->http.stop();
}

}  // namespace modelforge::api
