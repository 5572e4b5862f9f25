#pragma once

#include <cstddef>
#include <list>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include "json.hpp"
#include "ludilite/grammar.hpp"
#include "ludilite/rewards.hpp"

namespace ludilite {

inline constexpr const char* kVersion = "0.1.0";

// Thread-safe least-recently-used cache of ground-truth concepts.
class ReferenceCache {
 public:
  explicit ReferenceCache(std::size_t capacity) : capacity_(capacity) {}

  std::optional<ReferenceConcepts> get(const std::string& key);
  void put(const std::string& key, ReferenceConcepts value);
  std::size_t size() const;

 private:
  using Entry = std::pair<std::string, ReferenceConcepts>;

  std::size_t capacity_;
  mutable std::mutex mutex_;
  std::list<Entry> order_;  // most recent first
  std::unordered_map<std::string, std::list<Entry>::iterator> index_;
};

// Cache key covering the reference text and every setting that changes its
// concepts.
std::string reference_cache_key(const std::string& reference, const RewardConfig& cfg);

// Request handling independent of the transport, so it can be exercised
// directly and behind HTTP.
class RewardService {
 public:
  struct Response {
    int status = 200;
    nlohmann::json body;
  };

  RewardService(Grammar grammar, RewardConfig defaults, std::size_t cache_capacity = 256);

  // POST /v1/reward
  Response handle_reward(const nlohmann::json& request);
  Response handle_reward_body(const std::string& body);
  // GET /v1/health
  nlohmann::json health() const;
  // GET /v1/config
  nlohmann::json config() const;

  const RewardConfig& defaults() const { return defaults_; }
  const Grammar& grammar() const { return grammar_; }

 private:
  Grammar grammar_;
  RewardConfig defaults_;
  ReferenceCache cache_;
};

nlohmann::json error_body(const std::string& code, const std::string& message);

// HTTP/1.1 front end.
class HttpServer {
 public:
  explicit HttpServer(RewardService& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds; port 0 picks a free port. Returns the bound port or throws.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace ludilite
