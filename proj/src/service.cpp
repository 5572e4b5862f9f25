#include "ludilite/service.hpp"

#include <chrono>
#include <stdexcept>

#include "httplib.h"
#include "ludilite/json_io.hpp"

namespace ludilite {

using nlohmann::json;

std::optional<ReferenceConcepts> ReferenceCache::get(const std::string& key) {
  std::lock_guard lock(mutex_);
  auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  order_.splice(order_.begin(), order_, it->second);
  return it->second->second;
}

void ReferenceCache::put(const std::string& key, ReferenceConcepts value) {
  std::lock_guard lock(mutex_);
  if (capacity_ == 0) return;
  if (auto it = index_.find(key); it != index_.end()) {
    it->second->second = std::move(value);
    order_.splice(order_.begin(), order_, it->second);
    return;
  }
  order_.emplace_front(key, std::move(value));
  index_[key] = order_.begin();
  if (order_.size() > capacity_) {
    index_.erase(order_.back().first);
    order_.pop_back();
  }
}

std::size_t ReferenceCache::size() const {
  std::lock_guard lock(mutex_);
  return order_.size();
}

std::string reference_cache_key(const std::string& reference, const RewardConfig& cfg) {
  json settings = {{"playouts_gt", cfg.playouts_gt}, {"max_turns", cfg.max_turns},
                   {"budget_secs", cfg.budget_secs}, {"probe_seeds", cfg.probe_seeds},
                   {"seed", cfg.seed}};
  return settings.dump() + '\n' + reference;
}

json error_body(const std::string& code, const std::string& message) {
  return {{"error", {{"code", code}, {"message", message}}}};
}

RewardService::RewardService(Grammar grammar, RewardConfig defaults, std::size_t cache_capacity)
    : grammar_(std::move(grammar)), defaults_(defaults), cache_(cache_capacity) {
  defaults_.validate();
}

RewardService::Response RewardService::handle_reward_body(const std::string& body) {
  json request;
  try {
    request = json::parse(body);
  } catch (const json::parse_error& e) {
    return {400, error_body("invalid-request", std::string("malformed JSON: ") + e.what())};
  }
  return handle_reward(request);
}

RewardService::Response RewardService::handle_reward(const json& request) {
  const auto start = std::chrono::steady_clock::now();
  if (!request.is_object()) return {400, error_body("invalid-request", "body must be an object")};

  auto reference_it = request.find("reference");
  if (reference_it == request.end() || !reference_it->is_string()) {
    return {400, error_body("invalid-request", "'reference' must be a string")};
  }
  auto candidates_it = request.find("candidates");
  if (candidates_it == request.end() || !candidates_it->is_array()) {
    return {400, error_body("invalid-request", "'candidates' must be an array of strings")};
  }
  std::vector<std::string> candidates;
  for (const json& c : *candidates_it) {
    if (!c.is_string()) {
      return {400, error_body("invalid-request", "'candidates' must be an array of strings")};
    }
    candidates.push_back(c.get<std::string>());
  }
  if (candidates.empty()) return {400, error_body("invalid-request", "'candidates' is empty")};

  json request_id = nullptr;
  if (auto it = request.find("request_id"); it != request.end()) {
    if (!it->is_string() && !it->is_null()) {
      return {400, error_body("invalid-request", "'request_id' must be a string")};
    }
    request_id = *it;
  }

  RewardConfig cfg;
  try {
    auto overrides = request.find("config");
    cfg = apply_overrides(defaults_, overrides == request.end() ? json(nullptr) : *overrides);
  } catch (const ConfigError& e) {
    return {400, error_body("invalid-config", e.what())};
  }

  const std::string& reference_text = reference_it->get_ref<const std::string&>();
  const std::string key = reference_cache_key(reference_text, cfg);
  std::optional<ReferenceConcepts> reference = cache_.get(key);
  const bool cache_hit = reference.has_value();
  try {
    if (!reference) {
      reference = compute_reference(reference_text, cfg);
      cache_.put(key, *reference);
    }
    ScoreResult result = score_candidates(*reference, candidates, grammar_, cfg);

    json breakdowns = json::array();
    for (const RewardBreakdown& b : result.breakdowns) breakdowns.push_back(to_json(b));
    const double elapsed_ms = std::chrono::duration<double, std::milli>(
                                  std::chrono::steady_clock::now() - start)
                                  .count();
    return {200,
            {{"request_id", request_id},
             {"breakdowns", std::move(breakdowns)},
             {"advantages", result.advantages},
             {"reference_concepts", to_json(result.reference.concepts)},
             {"cache_hit", cache_hit},
             {"timing_ms", elapsed_ms}}};
  } catch (const ReferenceError& e) {
    return {422, error_body(to_string(e.code()), e.what())};
  } catch (const std::exception& e) {
    return {500, error_body("internal-error", e.what())};
  }
}

json RewardService::health() const {
  return {{"status", "ok"}, {"version", kVersion}};
}

json RewardService::config() const {
  return {{"config", to_json(defaults_)}, {"start_symbol", grammar_.start_symbol()}};
}

struct HttpServer::Impl {
  RewardService& service;
  httplib::Server server;
};

HttpServer::HttpServer(RewardService& service) : impl_(new Impl{service, {}}) {
  auto& svc = impl_->service;
  const auto send = [](httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  };
  impl_->server.Post("/v1/reward", [&svc, send](const httplib::Request& req, httplib::Response& res) {
    const RewardService::Response out = svc.handle_reward_body(req.body);
    send(res, out.status, out.body);
  });
  impl_->server.Get("/v1/health", [&svc, send](const httplib::Request&, httplib::Response& res) {
    send(res, 200, svc.health());
  });
  impl_->server.Get("/v1/config", [&svc, send](const httplib::Request&, httplib::Response& res) {
    send(res, 200, svc.config());
  });
  impl_->server.set_error_handler([send](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) {
      send(res, res.status, error_body(res.status == 404 ? "not-found" : "http-error",
                                       "HTTP status " + std::to_string(res.status)));
    }
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  int bound = -1;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (impl_->server.bind_to_port(host, port)) {
    bound = port;
  }
  if (bound < 0) {
    throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  }
  return bound;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace ludilite
