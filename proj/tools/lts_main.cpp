// lts: letter-to-sound rules from a pronunciation lexicon.
//
// Subcommands cover the whole pipeline: align a lexicon (automatic
// epsilon scattering or hand-seeded allowables), train per-letter decision
// trees over the aligned corpus, pronounce new words, score held-out data,
// sweep the accuracy/size trade-off, and compress a lexicon into
// trees + exceptions.
//
// Exit codes: 0 success, 1 usage, 2 bad input data, 3 internal error.

#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ltskit/compress.hpp"
#include "ltskit/error.hpp"

namespace {

using namespace lts;

LexFormat parse_format(const std::string& name) {
  if (name == "cmu") return LexFormat::kCmu;
  if (name == "oald") return LexFormat::kOaldLike;
  if (name == "tsv") return LexFormat::kGenericTsv;
  throw DataError("unknown lexicon format: " + name);
}

Direction parse_direction(const std::string& name) {
  if (name == "ltr") return Direction::kLeftToRight;
  if (name == "rtl") return Direction::kRightToLeft;
  throw DataError("unknown direction: " + name);
}

StressMode parse_stress_mode(const std::string& name) {
  if (name == "merged") return StressMode::kMerged;
  if (name == "separate") return StressMode::kSeparate;
  if (name == "none") return StressMode::kNone;
  throw DataError("unknown stress mode: " + name);
}

void write_output(const std::string& path,
                  const std::function<void(std::ostream&)>& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    std::cout.flush();
    check_data(static_cast<bool>(std::cout), "write to stdout failed");
    return;
  }
  std::ofstream out(path, std::ios::binary);
  check_data(static_cast<bool>(out), "cannot write file: " + path);
  fn(out);
  out.flush();
  check_data(static_cast<bool>(out), "write failed: " + path);
}

std::string slurp(std::istream& in) {
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// --- shared option blocks -------------------------------------------------

struct LexiconArgs {
  std::string path;
  std::string format = "cmu";
  std::string pseudo_file;
  std::string rejects_out;
  bool drop_variants = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("lexicon", path, "lexicon file")->required();
    cmd->add_option("--format", format, "lexicon format: cmu | oald | tsv")
        ->check(CLI::IsMember({"cmu", "oald", "tsv"}));
    cmd->add_option("--pseudo", pseudo_file,
                    "pseudo-phone definitions (default: built-in K_S G_Z W_A)");
    cmd->add_option("--rejects-out", rejects_out,
                    "write rejected lexicon lines to this TSV");
    cmd->add_flag("--drop-variants", drop_variants,
                  "keep only the first pronunciation of each cmu word");
  }

  ParseResult parse() const {
    ParseOptions opts;
    opts.drop_variants = drop_variants;
    ParseResult result = parse_lexicon(path, parse_format(format), opts);
    if (!result.rejects.empty()) {
      std::cerr << "note: " << result.rejects.size()
                << " lexicon line(s) rejected\n";
      if (!rejects_out.empty())
        write_output(rejects_out, [&](std::ostream& out) {
          write_rejects_tsv(result.rejects, out);
        });
    }
    return result;
  }

  PseudoSet pseudos() const {
    return pseudo_file.empty() ? PseudoSet::defaults()
                               : PseudoSet::load(pseudo_file);
  }
};

struct FeatureArgs {
  int window = 3;
  int feedback = 0;
  std::string direction = "ltr";
  bool use_pos = false;
  std::string stress = "merged";
  std::string convention;  // empty = sniff from the data

  void attach(CLI::App* cmd) {
    cmd->add_option("--window", window, "letters of context each side")
        ->check(CLI::Range(0, 32));
    cmd->add_option("--feedback", feedback,
                    "previously transcribed symbols fed back")
        ->check(CLI::Range(0, 32));
    cmd->add_option("--direction", direction, "visit order: ltr | rtl")
        ->check(CLI::IsMember({"ltr", "rtl"}));
    cmd->add_flag("--pos", use_pos, "add the part-of-speech attribute");
    cmd->add_option("--stress", stress,
                    "stress handling: merged | separate | none")
        ->check(CLI::IsMember({"merged", "separate", "none"}));
    cmd->add_option("--convention", convention,
                    "stress convention: asterisk | digits (default: sniffed)");
  }

  FeatureConfig config() const {
    FeatureConfig cfg;
    cfg.window = window;
    cfg.feedback = feedback;
    cfg.direction = parse_direction(direction);
    cfg.use_pos = use_pos;
    cfg.stress = parse_stress_mode(stress);
    cfg.validate();
    return cfg;
  }

  StressConvention conv_or(StressConvention sniffed) const {
    if (convention.empty()) return sniffed;
    auto conv = stress_convention_from(convention);
    check_data(conv.has_value(), "unknown stress convention: " + convention);
    return *conv;
  }
};

struct TrainArgs {
  double min_gain = 0.0;
  int max_depth = -1;

  void attach(CLI::App* cmd) {
    cmd->add_option("--min-gain", min_gain,
                    "stop splitting at gains <= this (0 grows to purity)");
    cmd->add_option("--max-depth", max_depth,
                    "depth cap, -1 = unbounded (compression knob)");
  }

  TrainConfig config() const {
    check_data(min_gain >= 0.0, "--min-gain must be >= 0");
    check_data(max_depth >= -1, "--max-depth must be >= -1");
    TrainConfig tc;
    tc.min_gain = min_gain;
    if (max_depth >= 0) tc.max_depth = max_depth;
    return tc;
  }
};

struct SplitArg {
  std::string spec;

  void attach(CLI::App* cmd) {
    cmd->add_option("--split", spec,
                    "held-out split `every:N:K`: rows with index % N == K "
                    "are the test part");
  }

  std::optional<SplitSpec> parse(std::size_t count) const {
    if (spec.empty()) return std::nullopt;
    std::size_t n = 0, k = 0;
    char colon1 = 0, colon2 = 0;
    std::istringstream in(spec);
    std::string head;
    std::getline(in, head, ':');
    std::istringstream rest(spec.substr(head.size()));
    rest >> colon1 >> n >> colon2 >> k;
    check_data(head == "every" && colon1 == ':' && colon2 == ':' &&
                   static_cast<bool>(rest) && n >= 2,
               "bad --split (want every:N:K): " + spec);
    return split_every_nth(count, n, k);
  }
};

StressConvention sniff_convention(std::span<const LexiconEntry> entries) {
  bool star = false, digit = false;
  for (const auto& e : entries)
    for (const auto& ph : e.phones)
      for (const auto& part : pseudo_parts(ph)) {
        if (part.size() < 2) continue;
        if (part.back() == '*') star = true;
        if (part.back() >= '0' && part.back() <= '2') digit = true;
      }
  return digit && !star ? StressConvention::kCmuDigits
                        : StressConvention::kAsterisk;
}

template <typename T>
std::vector<T> select(const std::vector<T>& items,
                      const std::vector<std::size_t>& indices) {
  std::vector<T> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(items[i]);
  return out;
}

// Merge pseudo-phones across the corpus; returns the merged entries plus
// the indices that still cannot fit one symbol per letter.
struct MergedCorpus {
  std::vector<LexiconEntry> entries;   // all entries, merged form
  std::vector<char> alignable;        // per entry
  std::size_t unalignable = 0;
};

MergedCorpus merge_corpus(const std::vector<LexiconEntry>& entries,
                          const PseudoSet& pseudos, StressConvention conv) {
  MergedCorpus merged;
  merged.entries.reserve(entries.size());
  merged.alignable.reserve(entries.size());
  for (const auto& entry : entries) {
    MergeResult r = merge_pseudo_phones(entry, pseudos, conv);
    merged.entries.push_back(std::move(r.entry));
    merged.alignable.push_back(r.alignable ? 1 : 0);
    if (!r.alignable) ++merged.unalignable;
  }
  return merged;
}

// --- align ---------------------------------------------------------------

struct AlignCmd {
  LexiconArgs lex;
  std::string method = "em";
  std::string allowables_file;
  std::string out;
  std::string table_out;
  std::string unalignable_out;
  std::string convention;
  int iters = 10;
  double tol = 1e-4;
  int threads = 0;

  void attach(CLI::App* cmd) {
    lex.attach(cmd);
    cmd->add_option("--method", method, "alignment method: em | seeded")
        ->check(CLI::IsMember({"em", "seeded"}));
    cmd->add_option("--allowables", allowables_file,
                    "letter -> symbol table (required for --method seeded)");
    cmd->add_option("-o,--out", out, "alignments TSV (default: stdout)");
    cmd->add_option("--table-out", table_out,
                    "dump the letter/symbol probability table");
    cmd->add_option("--unalignable-out", unalignable_out,
                    "write entries that cannot be aligned");
    cmd->add_option("--iters", iters, "EM iteration cap")->check(CLI::Range(1, 1000));
    cmd->add_option("--tol", tol, "EM probability-change tolerance");
    cmd->add_option("--threads", threads, "worker threads (0 = hardware)");
  }

  void run() const {
    ParseResult parsed = lex.parse();
    StressConvention conv = parsed.inventory.stress;
    MergedCorpus merged = merge_corpus(parsed.entries, lex.pseudos(), conv);

    std::vector<std::size_t> usable;
    for (std::size_t i = 0; i < merged.entries.size(); ++i)
      if (merged.alignable[i]) usable.push_back(i);
    std::vector<LexiconEntry> entries = select(merged.entries, usable);
    check_data(!entries.empty(), "no alignable entries");

    std::vector<std::optional<Alignment>> chosen(merged.entries.size());
    AssociationTable table;
    if (method == "em") {
      EmResult em = em_train(entries, iters, tol, threads);
      std::cerr << "em: " << em.iterations << " iteration(s), "
                << (em.converged ? "converged" : "iteration cap") << '\n';
      table = std::move(em.table);
      for (std::size_t k = 0; k < usable.size(); ++k)
        chosen[usable[k]] = std::move(em.alignments[k]);
    } else {
      check_data(!allowables_file.empty(),
                 "--method seeded needs --allowables");
      AllowablesTable allow = AllowablesTable::load(allowables_file);
      table = estimate_pair_probs(entries, allow, conv);
      for (std::size_t k = 0; k < usable.size(); ++k)
        chosen[usable[k]] =
            best_seeded_alignment(entries[k], allow, table, conv);
    }

    std::vector<LexiconEntry> aligned_entries;
    std::vector<Alignment> alignments;
    UnalignableReport report;
    for (std::size_t i = 0; i < merged.entries.size(); ++i) {
      if (chosen[i]) {
        aligned_entries.push_back(merged.entries[i]);
        alignments.push_back(std::move(*chosen[i]));
      } else {
        report.items.push_back({i, merged.entries[i].word.size()});
      }
    }
    report.total = report.items.size();
    report.per_thousand = merged.entries.empty()
                              ? 0.0
                              : 1000.0 * static_cast<double>(report.total) /
                                    static_cast<double>(merged.entries.size());
    std::cerr << "aligned " << aligned_entries.size() << " of "
              << merged.entries.size() << " entries";
    if (report.total)
      std::cerr << " (" << report.total << " unalignable)";
    std::cerr << '\n';

    check_data(!aligned_entries.empty(), "no entry could be aligned");
    write_output(out, [&](std::ostream& os) {
      write_alignments_tsv(aligned_entries, alignments, os);
    });
    if (!table_out.empty())
      write_output(table_out,
                   [&](std::ostream& os) { table.dump_tsv(os); });
    if (!unalignable_out.empty())
      write_output(unalignable_out, [&](std::ostream& os) {
        write_unalignable_tsv(report, merged.entries, os);
      });
  }
};

// --- seed-report ---------------------------------------------------------

struct SeedReportCmd {
  LexiconArgs lex;
  std::string allowables_file;
  std::string out;

  void attach(CLI::App* cmd) {
    lex.attach(cmd);
    cmd->add_option("--allowables", allowables_file, "letter -> symbol table")
        ->required();
    cmd->add_option("-o,--out", out, "report TSV (default: stdout)");
  }

  void run() const {
    ParseResult parsed = lex.parse();
    StressConvention conv = parsed.inventory.stress;
    MergedCorpus merged = merge_corpus(parsed.entries, lex.pseudos(), conv);
    AllowablesTable allow = AllowablesTable::load(allowables_file);
    UnalignableReport report =
        report_unalignable(merged.entries, allow, conv);
    std::cerr << report.total << " unalignable of " << merged.entries.size()
              << " (" << std::fixed << std::setprecision(1)
              << report.per_thousand << " per thousand)\n";
    write_output(out, [&](std::ostream& os) {
      write_unalignable_tsv(report, merged.entries, os);
    });
  }
};

// --- train ---------------------------------------------------------------

struct TrainCmd {
  std::string alignments_file;
  std::string out;
  FeatureArgs features;
  TrainArgs train;
  SplitArg split;
  int threads = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--alignments", alignments_file,
                    "aligned corpus from `lts align`")
        ->required();
    cmd->add_option("-o,--out", out, "model file (default: stdout)");
    features.attach(cmd);
    train.attach(cmd);
    split.attach(cmd);
    cmd->add_option("--threads", threads, "worker threads (0 = hardware)");
  }

  void run() const {
    std::ifstream in(alignments_file, std::ios::binary);
    check_data(static_cast<bool>(in), "cannot read file: " + alignments_file);
    AlignedCorpus corpus = read_alignments_tsv(in);
    StressConvention conv =
        features.conv_or(sniff_convention(corpus.entries));

    std::vector<LexiconEntry> entries = corpus.entries;
    std::vector<Alignment> alignments = corpus.alignments;
    if (auto s = split.parse(corpus.entries.size())) {
      entries = select(corpus.entries, s->train);
      alignments = select(corpus.alignments, s->train);
      std::cerr << "training on " << entries.size() << " of "
                << corpus.entries.size() << " entries\n";
    }
    Model model = train_model(entries, alignments, features.config(),
                              train.config(), conv, threads);
    std::cerr << "trained " << model.trees.size() << " tree(s), total size "
              << model.size() << '\n';
    write_output(out, [&](std::ostream& os) { serialize_model(model, os); });
  }
};

// --- predict -------------------------------------------------------------

struct PredictCmd {
  std::string model_file;
  std::string words_file;
  std::string out;
  std::string unknown = "fail";
  int threads = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--model", model_file, "model file from `lts train`")
        ->required();
    cmd->add_option("words", words_file,
                    "word list: `word` or `word<TAB>pos` per line "
                    "(default: stdin)");
    cmd->add_option("-o,--out", out, "predictions TSV (default: stdout)");
    cmd->add_option("--unknown", unknown,
                    "letters outside the model alphabet: fail | skip")
        ->check(CLI::IsMember({"fail", "skip"}));
    cmd->add_option("--threads", threads, "worker threads (0 = hardware)");
  }

  void run() const {
    Model model = load_model(model_file);
    std::string text;
    if (words_file.empty() || words_file == "-") {
      text = slurp(std::cin);
    } else {
      std::ifstream in(words_file, std::ios::binary);
      check_data(static_cast<bool>(in), "cannot read file: " + words_file);
      text = slurp(in);
    }
    std::vector<LexiconEntry> entries;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      std::size_t tab = line.find('\t');
      LexiconEntry e;
      e.word = line.substr(0, tab == std::string::npos ? line.size() : tab);
      if (tab != std::string::npos) e.pos = line.substr(tab + 1);
      entries.push_back(std::move(e));
    }
    check_data(!entries.empty(), "no words to transcribe");

    TranscribeOptions opts;
    opts.unknown = unknown == "skip" ? UnknownLetterPolicy::kSkipEpsilon
                                     : UnknownLetterPolicy::kFail;
    BatchResult batch = transcribe_batch(model, entries, threads, opts);
    write_output(out, [&](std::ostream& os) {
      write_predictions_tsv(entries, batch, os);
    });
    for (const auto& err : batch.errors)
      std::cerr << "error: " << entries[err.index].word << ": " << err.message
                << '\n';
    check_data(batch.errors.empty(),
               std::to_string(batch.errors.size()) + " word(s) failed");
  }
};

// --- eval ----------------------------------------------------------------

struct EvalCmd {
  std::string model_file;
  std::string alignments_file;
  std::string out;
  SplitArg split;
  bool tsv = false;
  int threads = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--model", model_file, "model file")->required();
    cmd->add_option("--alignments", alignments_file,
                    "reference aligned corpus")
        ->required();
    cmd->add_option("-o,--out", out, "metrics output (default: stdout)");
    split.attach(cmd);
    cmd->add_flag("--tsv", tsv, "machine-readable metrics");
    cmd->add_option("--threads", threads, "worker threads (0 = hardware)");
  }

  void run() const {
    Model model = load_model(model_file);
    std::ifstream in(alignments_file, std::ios::binary);
    check_data(static_cast<bool>(in), "cannot read file: " + alignments_file);
    AlignedCorpus corpus = read_alignments_tsv(in);
    std::vector<LexiconEntry> entries = corpus.entries;
    std::vector<Alignment> alignments = corpus.alignments;
    if (auto s = split.parse(corpus.entries.size())) {
      entries = select(corpus.entries, s->test);
      alignments = select(corpus.alignments, s->test);
      std::cerr << "scoring the " << entries.size() << "-entry test part\n";
    }
    TranscribeOptions opts;  // unknown letters fail -> scored as wrong
    opts.unknown = UnknownLetterPolicy::kFail;
    BatchResult batch = transcribe_batch(model, entries, threads, opts);
    if (!batch.errors.empty())
      std::cerr << "note: " << batch.errors.size()
                << " word(s) failed to transcribe (scored as wrong)\n";
    Metrics metrics = score(entries, alignments, batch, model.stress_conv);
    write_output(out, [&](std::ostream& os) {
      if (tsv)
        write_metrics_tsv(metrics, os);
      else
        write_metrics_table(metrics, os);
    });
  }
};

// --- sweep ---------------------------------------------------------------

struct SweepCmd {
  std::string alignments_file;
  std::string test_alignments_file;
  std::string out;
  std::string depths = "-1";
  std::string presets = "g";
  FeatureArgs features;
  SplitArg split;
  int threads = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--alignments", alignments_file, "aligned corpus")
        ->required();
    cmd->add_option("--test-alignments", test_alignments_file,
                    "separate test corpus (default: same as --alignments)");
    cmd->add_option("-o,--out", out, "CSV output (default: stdout)");
    cmd->add_option("--depths", depths,
                    "comma-separated depth caps, -1 = unbounded");
    cmd->add_option("--presets", presets,
                    "comma-separated from: g, gp, gppos");
    features.attach(cmd);
    split.attach(cmd);
    cmd->add_option("--threads", threads, "worker threads (0 = hardware)");
  }

  void run() const {
    std::ifstream in(alignments_file, std::ios::binary);
    check_data(static_cast<bool>(in), "cannot read file: " + alignments_file);
    AlignedCorpus corpus = read_alignments_tsv(in);
    StressConvention conv =
        features.conv_or(sniff_convention(corpus.entries));

    std::vector<LexiconEntry> train_e = corpus.entries;
    std::vector<Alignment> train_a = corpus.alignments;
    std::vector<LexiconEntry> test_e;
    std::vector<Alignment> test_a;
    if (!test_alignments_file.empty()) {
      check_data(split.spec.empty(),
                 "--split and --test-alignments are mutually exclusive");
      std::ifstream tin(test_alignments_file, std::ios::binary);
      check_data(static_cast<bool>(tin),
                 "cannot read file: " + test_alignments_file);
      AlignedCorpus test = read_alignments_tsv(tin);
      test_e = std::move(test.entries);
      test_a = std::move(test.alignments);
    } else if (auto s = split.parse(corpus.entries.size())) {
      train_e = select(corpus.entries, s->train);
      train_a = select(corpus.alignments, s->train);
      test_e = select(corpus.entries, s->test);
      test_a = select(corpus.alignments, s->test);
    } else {
      test_e = train_e;  // compression-style: train == test
      test_a = train_a;
    }

    std::vector<int> depth_grid;
    std::istringstream dstream(depths);
    std::string tok;
    while (std::getline(dstream, tok, ',')) {
      try {
        depth_grid.push_back(std::stoi(tok));
      } catch (const std::exception&) {
        throw DataError("bad --depths entry: " + tok);
      }
    }
    std::vector<FeaturePreset> preset_list;
    std::istringstream pstream(presets);
    while (std::getline(pstream, tok, ',')) {
      if (tok == "g")
        preset_list.push_back(FeaturePreset::kG);
      else if (tok == "gp")
        preset_list.push_back(FeaturePreset::kGP);
      else if (tok == "gppos")
        preset_list.push_back(FeaturePreset::kGPPos);
      else
        throw DataError("bad --presets entry: " + tok);
    }

    std::vector<SweepRow> rows =
        accuracy_size_sweep(train_e, train_a, test_e, test_a,
                            features.config(), depth_grid, preset_list, conv,
                            threads);
    write_output(out, [&](std::ostream& os) { write_sweep_csv(rows, os); });
  }
};

// --- compress ------------------------------------------------------------

struct CompressCmd {
  LexiconArgs lex;
  std::string method = "em";
  std::string allowables_file;
  std::string model_out;
  std::string exceptions_out;
  std::string stats_out;
  FeatureArgs features;
  TrainArgs train;
  bool drop_unalignable = false;
  int iters = 10;
  double tol = 1e-4;
  int threads = 0;

  void attach(CLI::App* cmd) {
    lex.attach(cmd);
    cmd->add_option("--method", method, "alignment method: em | seeded")
        ->check(CLI::IsMember({"em", "seeded"}));
    cmd->add_option("--allowables", allowables_file,
                    "letter -> symbol table (required for --method seeded)");
    cmd->add_option("--model-out", model_out, "model file")->required();
    cmd->add_option("--exceptions-out", exceptions_out, "exceptions TSV")
        ->required();
    cmd->add_option("--stats-out", stats_out,
                    "compression statistics (default: stderr summary only)");
    features.attach(cmd);
    train.attach(cmd);
    cmd->add_flag("--drop-unalignable", drop_unalignable,
                  "drop unalignable entries instead of counting them "
                  "against coverage");
    cmd->add_option("--iters", iters, "EM iteration cap")->check(CLI::Range(1, 1000));
    cmd->add_option("--tol", tol, "EM probability-change tolerance");
    cmd->add_option("--threads", threads, "worker threads (0 = hardware)");
  }

  void run() const {
    ParseResult parsed = lex.parse();
    StressConvention conv = features.conv_or(parsed.inventory.stress);
    MergedCorpus merged = merge_corpus(parsed.entries, lex.pseudos(), conv);

    std::vector<std::size_t> usable;
    for (std::size_t i = 0; i < merged.entries.size(); ++i)
      if (merged.alignable[i]) usable.push_back(i);
    std::vector<LexiconEntry> entries = select(merged.entries, usable);
    check_data(!entries.empty(), "no alignable entries");

    std::vector<std::optional<Alignment>> alignments(merged.entries.size());
    if (method == "em") {
      EmResult em = em_train(entries, iters, tol, threads);
      std::cerr << "em: " << em.iterations << " iteration(s), "
                << (em.converged ? "converged" : "iteration cap") << '\n';
      for (std::size_t k = 0; k < usable.size(); ++k)
        alignments[usable[k]] = std::move(em.alignments[k]);
    } else {
      check_data(!allowables_file.empty(),
                 "--method seeded needs --allowables");
      AllowablesTable allow = AllowablesTable::load(allowables_file);
      AssociationTable table = estimate_pair_probs(entries, allow, conv);
      for (std::size_t k = 0; k < usable.size(); ++k)
        alignments[usable[k]] =
            best_seeded_alignment(entries[k], allow, table, conv);
    }

    std::vector<LexiconEntry> corpus = merged.entries;
    if (drop_unalignable) {
      std::vector<LexiconEntry> kept_e;
      std::vector<std::optional<Alignment>> kept_a;
      for (std::size_t i = 0; i < corpus.size(); ++i)
        if (alignments[i]) {
          kept_e.push_back(std::move(corpus[i]));
          kept_a.push_back(std::move(alignments[i]));
        }
      corpus = std::move(kept_e);
      alignments = std::move(kept_a);
    }

    CompressedLexicon result = lts::compress(
        corpus, alignments, features.config(), train.config(), conv, threads);
    write_output(model_out,
                 [&](std::ostream& os) { serialize_model(result.model, os); });
    write_output(exceptions_out,
                 [&](std::ostream& os) { write_exceptions_tsv(result, os); });
    if (!stats_out.empty())
      write_output(stats_out,
                   [&](std::ostream& os) { write_stats(result.stats, os); });
    write_stats(result.stats, std::cerr);
  }
};

// --- lookup --------------------------------------------------------------

struct LookupCmd {
  std::string model_file;
  std::string exceptions_file;
  std::string word;
  std::string pos;

  void attach(CLI::App* cmd) {
    cmd->add_option("--model", model_file, "model file")->required();
    cmd->add_option("--exceptions", exceptions_file,
                    "exceptions TSV from `lts compress`");
    cmd->add_option("word", word, "word to pronounce")->required();
    cmd->add_option("pos", pos, "optional part-of-speech tag");
  }

  void run() const {
    CompressedLexicon lex;
    lex.model = load_model(model_file);
    if (!exceptions_file.empty()) {
      std::ifstream in(exceptions_file, std::ios::binary);
      check_data(static_cast<bool>(in),
                 "cannot read file: " + exceptions_file);
      read_exceptions_tsv(in, lex);
    }
    for (const auto& variant : lookup(lex, word, pos)) {
      for (std::size_t i = 0; i < variant.size(); ++i) {
        if (i) std::cout << ' ';
        std::cout << variant[i];
      }
      std::cout << '\n';
    }
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"letter-to-sound rules from a pronunciation lexicon"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "lts 1.0.0");

  AlignCmd align_cmd;
  SeedReportCmd seed_cmd;
  TrainCmd train_cmd;
  PredictCmd predict_cmd;
  EvalCmd eval_cmd;
  SweepCmd sweep_cmd;
  CompressCmd compress_cmd;
  LookupCmd lookup_cmd;

  align_cmd.attach(app.add_subcommand(
      "align", "align letters to phones over a whole lexicon"));
  seed_cmd.attach(app.add_subcommand(
      "seed-report", "list entries an allowables table cannot align"));
  train_cmd.attach(app.add_subcommand(
      "train", "induce per-letter decision trees from an aligned corpus"));
  predict_cmd.attach(
      app.add_subcommand("predict", "pronounce a list of words"));
  eval_cmd.attach(app.add_subcommand(
      "eval", "score a model against a reference aligned corpus"));
  sweep_cmd.attach(app.add_subcommand(
      "sweep", "accuracy / size trade-off across depth caps and features"));
  compress_cmd.attach(app.add_subcommand(
      "compress", "compress a lexicon into trees + exceptions"));
  lookup_cmd.attach(app.add_subcommand(
      "lookup", "pronounce one word via exceptions, then the trees"));

  try {
    app.parse(argc, argv);
    if (app.got_subcommand("align")) align_cmd.run();
    if (app.got_subcommand("seed-report")) seed_cmd.run();
    if (app.got_subcommand("train")) train_cmd.run();
    if (app.got_subcommand("predict")) predict_cmd.run();
    if (app.got_subcommand("eval")) eval_cmd.run();
    if (app.got_subcommand("sweep")) sweep_cmd.run();
    if (app.got_subcommand("compress")) compress_cmd.run();
    if (app.got_subcommand("lookup")) lookup_cmd.run();
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const lts::DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const lts::InternalError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
