// Python bindings for the letter-to-sound toolkit. Entries travel as
// (word, pos, phones) tuples; alignments as lists of per-letter symbols
// with "-" for epsilon; models and compressed lexicons as opaque handles.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <optional>
#include <sstream>

#include "ltskit/compress.hpp"
#include "ltskit/error.hpp"

namespace py = pybind11;
using namespace lts;

namespace {

using EntryTuple = std::tuple<std::string, std::string,
                              std::vector<std::string>>;

std::vector<LexiconEntry> to_entries(const std::vector<EntryTuple>& tuples) {
  std::vector<LexiconEntry> entries;
  entries.reserve(tuples.size());
  for (const auto& [word, pos, phones] : tuples)
    entries.push_back({word, pos, phones});
  return entries;
}

std::vector<EntryTuple> from_entries(const std::vector<LexiconEntry>& entries) {
  std::vector<EntryTuple> tuples;
  tuples.reserve(entries.size());
  for (const auto& e : entries) tuples.emplace_back(e.word, e.pos, e.phones);
  return tuples;
}

LexFormat format_from(const std::string& name) {
  if (name == "cmu") return LexFormat::kCmu;
  if (name == "oald") return LexFormat::kOaldLike;
  if (name == "tsv") return LexFormat::kGenericTsv;
  throw DataError("unknown lexicon format: " + name);
}

StressConvention convention_from(const std::string& name) {
  auto conv = stress_convention_from(name);
  check_data(conv.has_value(), "unknown stress convention: " + name);
  return *conv;
}

FeatureConfig make_config(int window, int feedback,
                          const std::string& direction, bool pos,
                          const std::string& stress) {
  FeatureConfig cfg;
  cfg.window = window;
  cfg.feedback = feedback;
  if (direction == "ltr")
    cfg.direction = Direction::kLeftToRight;
  else if (direction == "rtl")
    cfg.direction = Direction::kRightToLeft;
  else
    throw DataError("unknown direction: " + direction);
  cfg.use_pos = pos;
  if (stress == "merged")
    cfg.stress = StressMode::kMerged;
  else if (stress == "separate")
    cfg.stress = StressMode::kSeparate;
  else if (stress == "none")
    cfg.stress = StressMode::kNone;
  else
    throw DataError("unknown stress mode: " + stress);
  cfg.validate();
  return cfg;
}

TrainConfig make_train_config(double min_gain, std::optional<int> max_depth) {
  TrainConfig tc;
  tc.min_gain = min_gain;
  tc.max_depth = max_depth;
  return tc;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "letter-to-sound rules: alignment, tree induction, compression";

  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<InternalError>(m, "InternalError",
                                        PyExc_RuntimeError);

  m.def(
      "parse_lexicon",
      [](const std::string& text, const std::string& format,
         bool drop_variants) {
        ParseOptions opts;
        opts.drop_variants = drop_variants;
        ParseResult result =
            parse_lexicon_text(text, format_from(format), opts);
        std::vector<std::tuple<std::size_t, std::string, std::string>> rejects;
        for (const auto& r : result.rejects)
          rejects.emplace_back(r.line_no, r.reason, r.raw);
        return py::make_tuple(from_entries(result.entries), rejects,
                              std::string(to_string(result.inventory.stress)));
      },
      py::arg("text"), py::arg("format") = "tsv",
      py::arg("drop_variants") = false,
      "Parse lexicon text -> (entries, rejects, stress_convention).");

  m.def(
      "align",
      [](const std::vector<EntryTuple>& raw, const std::string& convention,
         const std::string& method, const std::optional<std::string>& allowables,
         const std::optional<std::string>& pseudo, int iters, double tol,
         int threads) {
        StressConvention conv = convention_from(convention);
        PseudoSet pseudos =
            pseudo ? PseudoSet::parse(*pseudo) : PseudoSet::defaults();
        std::vector<LexiconEntry> entries = to_entries(raw);
        std::vector<LexiconEntry> merged;
        std::vector<std::size_t> usable;
        std::vector<std::size_t> unalignable;
        for (std::size_t i = 0; i < entries.size(); ++i) {
          MergeResult r = merge_pseudo_phones(entries[i], pseudos, conv);
          merged.push_back(std::move(r.entry));
          (r.alignable ? usable : unalignable).push_back(i);
        }
        std::vector<LexiconEntry> alignable_entries;
        for (std::size_t i : usable) alignable_entries.push_back(merged[i]);
        check_data(!alignable_entries.empty(), "no alignable entries");

        std::vector<std::optional<Alignment>> chosen(entries.size());
        if (method == "em") {
          EmResult em = em_train(alignable_entries, iters, tol, threads);
          for (std::size_t k = 0; k < usable.size(); ++k)
            chosen[usable[k]] = std::move(em.alignments[k]);
        } else if (method == "seeded") {
          check_data(allowables.has_value(),
                     "seeded alignment needs an allowables table");
          AllowablesTable allow = AllowablesTable::parse(*allowables);
          AssociationTable table =
              estimate_pair_probs(alignable_entries, allow, conv);
          for (std::size_t k = 0; k < usable.size(); ++k)
            chosen[usable[k]] = best_seeded_alignment(alignable_entries[k],
                                                      allow, table, conv);
        } else {
          throw DataError("unknown alignment method: " + method);
        }

        std::vector<EntryTuple> aligned_entries;
        std::vector<std::vector<std::string>> alignments;
        std::vector<std::size_t> failed = unalignable;
        for (std::size_t i = 0; i < entries.size(); ++i) {
          if (chosen[i]) {
            aligned_entries.emplace_back(merged[i].word, merged[i].pos,
                                         merged[i].phones);
            alignments.push_back(std::move(chosen[i]->out));
          } else if (std::find(failed.begin(), failed.end(), i) ==
                     failed.end()) {
            failed.push_back(i);
          }
        }
        std::sort(failed.begin(), failed.end());
        return py::make_tuple(aligned_entries, alignments, failed);
      },
      py::arg("entries"), py::arg("convention") = "asterisk",
      py::arg("method") = "em", py::arg("allowables") = py::none(),
      py::arg("pseudo") = py::none(), py::arg("iters") = 10,
      py::arg("tol") = 1e-4, py::arg("threads") = 0,
      "Align a corpus -> (merged_entries, alignments, unalignable_indices).");

  py::class_<Model, std::shared_ptr<Model>>(m, "Model")
      .def_property_readonly("size", &Model::size)
      .def_property_readonly("alphabet",
                             [](const Model& model) { return model.alphabet; })
      .def(
          "transcribe",
          [](const Model& model, const std::string& word,
             const std::string& pos, bool skip_unknown) {
            TranscribeOptions opts;
            opts.unknown = skip_unknown ? UnknownLetterPolicy::kSkipEpsilon
                                        : UnknownLetterPolicy::kFail;
            return transcribe(model, word, pos, opts).phones;
          },
          py::arg("word"), py::arg("pos") = "",
          py::arg("skip_unknown") = false)
      .def(
          "transcribe_raw",
          [](const Model& model, const std::string& word,
             const std::string& pos) {
            return transcribe(model, word, pos).raw;
          },
          py::arg("word"), py::arg("pos") = "")
      .def("serialize",
           [](const Model& model) {
             std::ostringstream out;
             serialize_model(model, out);
             return out.str();
           })
      .def_static("deserialize", [](const std::string& text) {
        std::istringstream in(text);
        return std::make_shared<Model>(deserialize_model(in));
      });

  m.def(
      "train",
      [](const std::vector<EntryTuple>& raw,
         const std::vector<std::vector<std::string>>& alignments, int window,
         int feedback, const std::string& direction, bool pos,
         const std::string& stress, const std::string& convention,
         double min_gain, std::optional<int> max_depth, int threads) {
        std::vector<LexiconEntry> entries = to_entries(raw);
        std::vector<Alignment> wrapped;
        wrapped.reserve(alignments.size());
        for (const auto& out : alignments) wrapped.push_back({out, 0.0});
        return std::make_shared<Model>(train_model(
            entries, wrapped, make_config(window, feedback, direction, pos,
                                          stress),
            make_train_config(min_gain, max_depth), convention_from(convention),
            threads));
      },
      py::arg("entries"), py::arg("alignments"), py::arg("window") = 3,
      py::arg("feedback") = 0, py::arg("direction") = "ltr",
      py::arg("pos") = false, py::arg("stress") = "merged",
      py::arg("convention") = "asterisk", py::arg("min_gain") = 0.0,
      py::arg("max_depth") = py::none(), py::arg("threads") = 0,
      "Train per-letter decision trees over an aligned corpus.");

  m.def(
      "evaluate",
      [](const Model& model, const std::vector<EntryTuple>& raw,
         const std::vector<std::vector<std::string>>& alignments,
         int threads) {
        std::vector<LexiconEntry> entries = to_entries(raw);
        std::vector<Alignment> wrapped;
        wrapped.reserve(alignments.size());
        for (const auto& out : alignments) wrapped.push_back({out, 0.0});
        BatchResult batch = transcribe_batch(model, entries, threads);
        Metrics metrics = score(entries, wrapped, batch, model.stress_conv);
        py::dict result;
        result["word_acc_stress"] = metrics.word_acc_stress;
        result["word_acc_nostress"] = metrics.word_acc_nostress;
        result["phone_acc"] = metrics.phone_acc;
        result["phone_acc_edit"] = metrics.phone_acc_edit;
        result["words"] = metrics.words;
        result["slots"] = metrics.slots;
        return result;
      },
      py::arg("model"), py::arg("entries"), py::arg("alignments"),
      py::arg("threads") = 0,
      "Score a model against a reference aligned corpus.");

  py::class_<CompressedLexicon, std::shared_ptr<CompressedLexicon>>(
      m, "CompressedLexicon")
      .def_property_readonly(
          "model",
          [](std::shared_ptr<CompressedLexicon> lex) {
            return std::shared_ptr<Model>(lex, &lex->model);
          })
      .def_property_readonly("stats",
                             [](const CompressedLexicon& lex) {
                               py::dict stats;
                               stats["nodes"] = lex.stats.nodes;
                               stats["coverage_pct"] = lex.stats.coverage_pct;
                               stats["exception_count"] =
                                   lex.stats.exception_count;
                               stats["entry_count"] = lex.stats.entry_count;
                               stats["unalignable_count"] =
                                   lex.stats.unalignable_count;
                               stats["source_bytes"] = lex.stats.source_bytes;
                               stats["model_bytes"] = lex.stats.model_bytes;
                               stats["exceptions_bytes"] =
                                   lex.stats.exceptions_bytes;
                               stats["ratio_vs_text"] = lex.stats.ratio_vs_text;
                               return stats;
                             })
      .def("lookup",
           [](const CompressedLexicon& lex, const std::string& word,
              const std::string& pos) { return lookup(lex, word, pos); },
           py::arg("word"), py::arg("pos") = "")
      .def("exceptions_tsv", [](const CompressedLexicon& lex) {
        std::ostringstream out;
        write_exceptions_tsv(lex, out);
        return out.str();
      });

  m.def(
      "compress",
      [](const std::vector<EntryTuple>& raw,
         const std::vector<std::optional<std::vector<std::string>>>& alignments,
         int window, int feedback, const std::string& direction, bool pos,
         const std::string& stress, const std::string& convention,
         double min_gain, std::optional<int> max_depth, int threads) {
        std::vector<LexiconEntry> entries = to_entries(raw);
        std::vector<std::optional<Alignment>> wrapped(alignments.size());
        for (std::size_t i = 0; i < alignments.size(); ++i)
          if (alignments[i]) wrapped[i] = Alignment{*alignments[i], 0.0};
        return std::make_shared<CompressedLexicon>(compress(
            entries, wrapped, make_config(window, feedback, direction, pos,
                                          stress),
            make_train_config(min_gain, max_depth), convention_from(convention),
            threads));
      },
      py::arg("entries"), py::arg("alignments"), py::arg("window") = 3,
      py::arg("feedback") = 0, py::arg("direction") = "ltr",
      py::arg("pos") = false, py::arg("stress") = "merged",
      py::arg("convention") = "asterisk", py::arg("min_gain") = 0.0,
      py::arg("max_depth") = py::none(), py::arg("threads") = 0,
      "Compress a lexicon into trees + exceptions (train == test). "
      "alignments[i] is None for an unalignable entry.");
}
