#include "ludilite/dataset.hpp"

#include <fstream>
#include <set>
#include <unordered_set>
#include <utility>

#include "json.hpp"
#include "ludilite/lexer.hpp"

namespace ludilite {

using nlohmann::json;

DatasetError::DatasetError(const std::string& source, std::size_t line, const std::string& message)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + message), line_(line) {}

namespace {

template <typename Fn>
void for_each_record(std::istream& in, const std::string& source, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw DatasetError(source, line_no, std::string("malformed record: ") + e.what());
    }
    if (!record.is_object()) throw DatasetError(source, line_no, "malformed record: not an object");
    fn(record, line_no);
  }
}

std::string required_string(const json& record, const char* field, const std::string& source,
                            std::size_t line) {
  auto it = record.find(field);
  if (it == record.end()) {
    throw DatasetError(source, line, std::string("malformed record: missing '") + field + "'");
  }
  if (!it->is_string()) {
    throw DatasetError(source, line, std::string("malformed record: '") + field + "' must be a string");
  }
  return it->get<std::string>();
}

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DatasetError(path, 0, "cannot open file");
  return in;
}

}  // namespace

std::vector<Instance> read_instances(std::istream& in, const std::string& source) {
  std::vector<Instance> instances;
  std::unordered_set<std::string> ids;
  for_each_record(in, source, [&](const json& record, std::size_t line) {
    Instance instance;
    instance.id = required_string(record, "id", source, line);
    instance.query = required_string(record, "query", source, line);
    instance.description = required_string(record, "description", source, line);
    if (auto it = record.find("category"); it != record.end() && !it->is_null()) {
      if (!it->is_string()) {
        throw DatasetError(source, line, "malformed record: 'category' must be a string");
      }
      instance.category = it->get<std::string>();
    }
    if (instance.id.empty()) throw DatasetError(source, line, "malformed record: empty id");
    if (instance.description.find_first_not_of(" \t\r\n") == std::string::npos) {
      throw DatasetError(source, line, "malformed record: empty description");
    }
    if (!ids.insert(instance.id).second) {
      throw DatasetError(source, line, "duplicate id '" + instance.id + "'");
    }
    instances.push_back(std::move(instance));
  });
  return instances;
}

std::vector<Instance> load_instances(const std::string& path) {
  std::ifstream in = open(path);
  return read_instances(in, path);
}

void write_instances(std::ostream& out, std::span<const Instance> instances) {
  for (const Instance& instance : instances) {
    json record = {{"id", instance.id},
                   {"query", instance.query},
                   {"description", instance.description}};
    if (instance.category) record["category"] = *instance.category;
    out << record.dump() << '\n';
  }
}

std::vector<Prediction> read_predictions(std::istream& in, const std::string& source) {
  std::vector<Prediction> predictions;
  std::set<std::pair<std::string, std::string>> keys;
  for_each_record(in, source, [&](const json& record, std::size_t line) {
    Prediction prediction;
    prediction.id = required_string(record, "id", source, line);
    prediction.candidate = required_string(record, "candidate", source, line);
    auto seed = record.find("seed");
    if (seed == record.end()) throw DatasetError(source, line, "malformed record: missing 'seed'");
    if (seed->is_string()) {
      prediction.seed = seed->get<std::string>();
    } else if (seed->is_number_integer()) {
      prediction.seed = std::to_string(seed->get<long long>());
    } else {
      throw DatasetError(source, line, "malformed record: 'seed' must be a string or integer");
    }
    if (!keys.emplace(prediction.id, prediction.seed).second) {
      throw DatasetError(source, line,
                         "duplicate prediction for id '" + prediction.id + "' seed '" +
                             prediction.seed + "'");
    }
    predictions.push_back(std::move(prediction));
  });
  return predictions;
}

std::vector<Prediction> load_predictions(const std::string& path) {
  std::ifstream in = open(path);
  return read_predictions(in, path);
}

void write_predictions(std::ostream& out, std::span<const Prediction> predictions) {
  for (const Prediction& p : predictions) {
    out << json{{"id", p.id}, {"seed", p.seed}, {"candidate", p.candidate}}.dump() << '\n';
  }
}

std::size_t description_length(const std::string& description) {
  const LexResult lexed = lex(description);
  return lexed.tokens.size() + (lexed.error ? 1 : 0);
}

std::vector<Instance> filter_by_length(std::span<const Instance> instances, std::size_t max_units) {
  std::vector<Instance> kept;
  for (const Instance& instance : instances) {
    if (description_length(instance.description) <= max_units) kept.push_back(instance);
  }
  return kept;
}

}  // namespace ludilite
