#include "banglapredict/model_store.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "banglapredict/error.hpp"

namespace banglapredict {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NoModelError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << body;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::uint64_t parse_field(const std::map<std::string, std::string>& fields, const std::string& key) {
  const auto it = fields.find(key);
  if (it == fields.end()) throw LoadError("manifest is missing '" + key + "'", 0);
  try {
    std::size_t used = 0;
    const auto v = std::stoull(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    throw LoadError("manifest field '" + key + "' is not an integer", 0);
  }
}

}  // namespace

std::string hex_digest(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ModelManifest save_model(const std::filesystem::path& directory, const Corpus& corpus,
                         const NgramTable& table) {
  std::filesystem::create_directories(directory);
  std::ostringstream counts;
  save_table(table, counts);
  const std::string counts_bytes = counts.str();

  ModelManifest m;
  char fp[32];
  std::snprintf(fp, sizeof fp, "%016llx",
                static_cast<unsigned long long>(fingerprint(corpus.sentences())));
  m.corpus_fingerprint = fp;
  m.max_order = table.max_order();
  m.sentences = corpus.size();
  m.tokens = corpus.token_count();
  m.word_forms = corpus.word_form_count();
  m.model_id = hex_digest(counts_bytes);

  std::ostringstream manifest;
  manifest << "format = banglapredict-model v1\n"
           << "corpus_fingerprint = " << m.corpus_fingerprint << '\n'
           << "max_order = " << m.max_order << '\n'
           << "sentences = " << m.sentences << '\n'
           << "tokens = " << m.tokens << '\n'
           << "word_forms = " << m.word_forms << '\n'
           << "model_id = " << m.model_id << '\n';

  write_file(directory / kCountsFile, counts_bytes);
  write_file(directory / kManifestFile, manifest.str());
  return m;
}

Model load_model(const std::filesystem::path& directory) {
  if (!std::filesystem::is_directory(directory)) {
    throw NoModelError("model directory not found: " + directory.string());
  }
  const std::string counts_bytes = read_file(directory / kCountsFile);
  const std::string manifest_bytes = read_file(directory / kManifestFile);

  std::map<std::string, std::string> fields;
  std::istringstream lines(manifest_bytes);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) throw LoadError("manifest: expected 'key = value'", line_no);
    fields[line.substr(0, eq)] = line.substr(eq + 3);
  }
  if (fields["format"] != "banglapredict-model v1") throw LoadError("unknown manifest format", 0);

  ModelManifest m;
  m.corpus_fingerprint = fields["corpus_fingerprint"];
  m.max_order = static_cast<int>(parse_field(fields, "max_order"));
  m.sentences = parse_field(fields, "sentences");
  m.tokens = parse_field(fields, "tokens");
  m.word_forms = parse_field(fields, "word_forms");
  m.model_id = hex_digest(counts_bytes);

  std::istringstream counts(counts_bytes);
  NgramTable table = load_table(counts);
  if (table.max_order() != m.max_order) throw LoadError("manifest max_order disagrees with counts", 0);
  return {std::move(table), std::move(m)};
}

}  // namespace banglapredict
