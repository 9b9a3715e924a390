#include <cstdio>
#include <fstream>
#include <sstream>

#include "banglapredict/evaluation.hpp"

namespace banglapredict {

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string hex64(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string pad_right(std::string s, std::size_t width) {
  // Labels are ASCII, so bytes equal columns.
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace

RenderedReport render_report(const EvalReport& report) {
  RenderedReport out;

  std::ostringstream text;
  text << "Accuracy by number of words in test sentence (top-1, held-out test split)\n\n";
  const std::size_t first_col = 8;
  std::vector<std::size_t> widths;
  text << pad_right("Length", first_col);
  for (Method m : report.methods) {
    const std::string label(method_label(m));
    widths.push_back(std::max<std::size_t>(label.size(), 12) + 2);
    text << pad_right(label, widths.back());
  }
  text << '\n';
  for (std::size_t len : report.lengths) {
    text << pad_right(std::to_string(len), first_col);
    for (std::size_t i = 0; i < report.methods.size(); ++i) {
      const auto& cell = report.cells.at(report.methods[i]).at(len);
      const std::string value =
          cell.total ? fixed(100.0 * cell.accuracy(), 2) + "% (" + std::to_string(cell.total) + ")"
                     : "n/a (0)";
      text << pad_right(value, widths[i]);
    }
    text << '\n';
  }

  text << "\nAverage accuracy\n";
  for (Method m : report.methods) {
    const auto it = report.averages.find(m);
    text << method_label(m) << ' ' << (it == report.averages.end() ? "n/a" : fixed(100.0 * it->second, 2))
         << '\n';
  }

  if (report.options.top_k > 1) {
    text << "\nTarget within top-" << report.options.top_k << " (supplementary)\n";
    for (Method m : report.methods) {
      std::size_t hit = 0, total = 0;
      for (const auto& [len, cell] : report.cells.at(m)) {
        hit += cell.correct_in_top_k;
        total += cell.total;
      }
      text << method_label(m) << ' '
           << (total ? fixed(100.0 * static_cast<double>(hit) / total, 2) : std::string("n/a")) << '\n';
    }
  }

  text << "\nProtocol\n";
  text << "train_fraction " << fixed(report.spec.train_fraction, 6) << '\n';
  text << "validation_fraction_of_train " << fixed(report.spec.validation_fraction_of_train, 6) << '\n';
  text << "seed " << report.spec.seed << '\n';
  text << "repeats " << report.spec.repeats << '\n';
  text << "max_order " << report.options.max_order << '\n';
  text << "cases_per_length " << report.options.cases_per_length << '\n';
  for (const auto& a : report.repeats) {
    text << "repeat " << a.repeat << " seed " << a.seed << " train " << a.train_sentences
         << " test " << a.test_sentences << " train_fingerprint " << hex64(a.train_fingerprint)
         << " lambdas " << fixed(a.lambdas.trigram, 4) << ',' << fixed(a.lambdas.bigram, 4) << ','
         << fixed(a.lambdas.unigram, 4) << " validation";
    for (Method m : report.methods) {
      text << ' ' << method_name(m) << '=' << fixed(a.validation_accuracy.at(m), 4);
    }
    text << '\n';
  }
  for (Method m : report.methods) {
    text << "selected " << method_name(m) << " repeat " << report.selected_repeat.at(m) << '\n';
  }
  out.table_text = text.str();

  std::ostringstream by_length;
  by_length << "method,length,accuracy,count\n";
  for (Method m : report.methods) {
    for (std::size_t len : report.lengths) {
      const auto& cell = report.cells.at(m).at(len);
      by_length << method_name(m) << ',' << len << ','
                << (cell.total ? fixed(cell.accuracy(), 4) : std::string("n/a")) << ','
                << cell.total << '\n';
    }
  }
  out.by_length_csv = by_length.str();

  std::ostringstream average;
  average << "method,average\n";
  for (Method m : report.methods) {
    const auto it = report.averages.find(m);
    average << method_name(m) << ','
            << (it == report.averages.end() ? std::string("n/a") : fixed(it->second, 4)) << '\n';
  }
  out.average_csv = average.str();
  return out;
}

void write_report(const RenderedReport& rendered, const std::filesystem::path& directory) {
  std::filesystem::create_directories(directory);
  auto write = [&](const char* name, const std::string& body) {
    std::ofstream f(directory / name, std::ios::binary | std::ios::trunc);
    f << body;
    if (!f) throw std::runtime_error("cannot write " + (directory / name).string());
  };
  write("report.txt", rendered.table_text);
  write("accuracy_by_length.csv", rendered.by_length_csv);
  write("accuracy_average.csv", rendered.average_csv);
}

}  // namespace banglapredict
