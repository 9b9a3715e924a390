#include <charconv>
#include <cstdlib>
#include <iomanip>
#include <sstream>

#include "banglapredict/error.hpp"
#include "banglapredict/models.hpp"

namespace banglapredict {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_real(std::string_view value, std::size_t line_no) {
  const std::string text(value);
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) {
    throw LoadError("expected a number, got '" + text + "'", line_no);
  }
  return v;
}

int parse_int(std::string_view value, std::size_t line_no) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (value.empty() || ec != std::errc() || ptr != value.data() + value.size()) {
    throw LoadError("expected an integer, got '" + std::string(value) + "'", line_no);
  }
  return v;
}

}  // namespace

PredictorConfig load_config(std::istream& source) {
  PredictorConfig config;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(source, line)) {
    ++line_no;
    const auto body = trim(std::string_view(line).substr(0, line.find('#')));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw LoadError("expected 'key = value'", line_no);
    const auto key = trim(body.substr(0, eq));
    const auto value = trim(body.substr(eq + 1));

    if (key == "method") {
      const auto m = parse_method(value);
      if (!m) throw LoadError("unknown method '" + std::string(value) + "'", line_no);
      config.method = *m;
    } else if (key == "k") {
      config.k = parse_int(value, line_no);
    } else if (key == "lambda.1") {
      config.lambdas.trigram = parse_real(value, line_no);
    } else if (key == "lambda.2") {
      config.lambdas.bigram = parse_real(value, line_no);
    } else if (key == "lambda.3") {
      config.lambdas.unigram = parse_real(value, line_no);
    } else if (key.substr(0, 6) == "alpha.") {
      const int index = parse_int(key.substr(6), line_no);
      if (index < 1 || index > 64) throw LoadError("alpha index out of range", line_no);
      if (config.alphas.size() < static_cast<std::size_t>(index)) {
        config.alphas.resize(static_cast<std::size_t>(index), 1.0);
      }
      config.alphas[static_cast<std::size_t>(index - 1)] = parse_real(value, line_no);
    } else {
      throw LoadError("unknown key '" + std::string(key) + "'", line_no);
    }
  }
  try {
    config.lambdas.validate();
    if (config.k < 1) throw ConfigError("k must be a positive integer");
  } catch (const ConfigError& e) {
    throw LoadError(e.what(), 0);
  }
  return config;
}

void save_config(const PredictorConfig& config, std::ostream& sink) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "method = " << method_name(config.method) << '\n';
  out << "k = " << config.k << '\n';
  for (std::size_t i = 0; i < config.alphas.size(); ++i) {
    out << "alpha." << i + 1 << " = " << config.alphas[i] << '\n';
  }
  out << "lambda.1 = " << config.lambdas.trigram << '\n';
  out << "lambda.2 = " << config.lambdas.bigram << '\n';
  out << "lambda.3 = " << config.lambdas.unigram << '\n';
  sink << out.str();
}

}  // namespace banglapredict
