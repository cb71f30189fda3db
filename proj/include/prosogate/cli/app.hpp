#pragma once

// The `prosogate` command line: synth, train, score, parse, eval, rank, bench.
// Exit codes: 0 success, 1 usage error, 2 data or grammar error.

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "../corpus/turn.hpp"
#include "../error.hpp"
#include "../eval/bench.hpp"
#include "../eval/crosstab.hpp"
#include "../eval/metrics.hpp"
#include "../eval/rank.hpp"
#include "../eval/report.hpp"
#include "../grammar/grammar.hpp"
#include "../parser/chart.hpp"
#include "../prosody/features.hpp"
#include "../prosody/mlp.hpp"
#include "../prosody/scorer.hpp"
#include "../prosody/synth.hpp"
#include "../version.hpp"

namespace prosogate::cli {

using json = nlohmann::json;

namespace detail {

struct Shared {
  std::uint64_t seed = 42;
  std::string format = "text";
  std::string out;
};

inline void add_shared(CLI::App* sub, Shared& s) {
  sub->add_option("--seed", s.seed, "Random seed")->capture_default_str();
  sub->add_option("--format", s.format, "Report format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
  sub->add_option("--out", s.out, "Output file (default: standard output)");
}

/// Writes to --out when given, otherwise to the standard stream.
inline void emit(const Shared& s, std::ostream& out, const std::string& text) {
  if (s.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(s.out, std::ios::binary);
  if (!f) throw InputFormatError("cannot write " + s.out);
  f << text;
}

inline std::string dump(json j) {
  j["tool_version"] = kToolVersion;
  return j.dump(2) + "\n";
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputFormatError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputFormatError(path + ": " + e.what());
  }
}

struct GateOptions {
  double threshold = 0.01;
  int rank = 0;
  bool off = false;
  std::size_t max_edges = 200000;
  bool final_boundary = false;

  void add(CLI::App* sub) {
    sub->add_option("--threshold", threshold, "Gate threshold on gap scores")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    sub->add_option("--rank", rank, "Gate by the N best gaps instead of a threshold")->check(CLI::PositiveNumber);
    sub->add_flag("--gate-off", off, "Propose every gap");
    sub->add_option("--max-edges", max_edges, "Edge cap per turn")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_flag("--assume-final-boundary", final_boundary, "Always propose the turn-final gap");
  }

  parser::ParseConfig config() const {
    parser::ParseConfig c;
    c.threshold = threshold;
    c.max_edges = max_edges;
    c.assume_final_boundary = final_boundary;
    if (off)
      c.mode = parser::GateMode::off;
    else if (rank > 0) {
      c.mode = parser::GateMode::rank;
      c.rank_limit = rank;
    }
    return c;
  }
};

inline json config_json(const parser::ParseConfig& c) {
  return {{"mode", parser::to_string(c.mode)},
          {"threshold", c.threshold},
          {"rank_limit", c.rank_limit},
          {"max_edges", c.max_edges},
          {"assume_final_boundary", c.assume_final_boundary}};
}

inline prosody::FeatureLayout layout_named(const std::string& name) {
  if (name == "default") return prosody::FeatureLayout::default_layout();
  if (name == "duration-f0") return prosody::FeatureLayout::duration_f0_subset();
  throw InvalidArgument("unknown layout " + name);
}

inline std::vector<std::size_t> parse_hidden(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      const long v = std::stol(part, &used);
      if (used != part.size() || v <= 0) throw std::invalid_argument(part);
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw CLI::ValidationError("--hidden", "expected positive integers separated by commas");
    }
  }
  if (out.empty()) throw CLI::ValidationError("--hidden", "needs at least one layer size");
  return out;
}

struct Recognition {
  std::size_t s3_plus = 0, s3_minus = 0, hit_plus = 0, hit_minus = 0;
  double balanced() const {
    const double a = s3_plus ? static_cast<double>(hit_plus) / static_cast<double>(s3_plus) : 1.0;
    const double b = s3_minus ? static_cast<double>(hit_minus) / static_cast<double>(s3_minus) : 1.0;
    return 0.5 * (a + b);
  }
};

/// Predicted S3 label per gap: S3+ if the score is at least 0.5.
inline std::vector<std::string> predicted_labels(const std::vector<double>& scores) {
  std::vector<std::string> out;
  for (double s : scores) out.push_back(s >= 0.5 ? "S3+" : "S3-");
  return out;
}

}  // namespace detail

/// Runs one command line. argv[0] is the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  using namespace detail;
  CLI::App app{"prosogate: prosody-gated head-trace parsing toolkit", "prosogate"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));
  Shared shared;

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus");
  prosody::SynthParams sp;
  bool no_gold = false;
  synth->add_option("--turns", sp.turns, "Number of turns")->capture_default_str();
  synth->add_option("--separation", sp.separation, "Acoustic cue size")->check(CLI::NonNegativeNumber)->capture_default_str();
  synth->add_option("--max-words", sp.max_words, "Longest sentence pattern (0: any)");
  synth->add_flag("--v2-only", sp.v2_only, "Only verb-second clauses");
  synth->add_flag("--no-gold", no_gold, "Omit gold trace annotation");
  add_shared(synth, shared);

  // train
  auto* trn = app.add_subcommand("train", "Train the boundary classifier");
  std::string corpus_path, hidden = "40,20", layout_name = "default";
  prosody::TrainParams tp;
  trn->add_option("--corpus", corpus_path, "Training corpus with syllables and S3 labels")->required();
  trn->add_option("--hidden", hidden, "Hidden layer sizes")->capture_default_str();
  trn->add_option("--epochs", tp.epochs, "Training epochs")->check(CLI::PositiveNumber)->capture_default_str();
  trn->add_option("--learning-rate", tp.learning_rate, "Step size")->check(CLI::PositiveNumber)->capture_default_str();
  trn->add_option("--layout", layout_name, "Feature layout")
      ->check(CLI::IsMember({"default", "duration-f0"}))
      ->capture_default_str();
  add_shared(trn, shared);  // --out names the classifier file

  // score
  auto* sc = app.add_subcommand("score", "Write classifier gap scores into a corpus");
  std::string classifier_path;
  bool overwrite = false, raw = false;
  sc->add_option("--corpus", corpus_path, "Corpus with syllable records")->required();
  sc->add_option("--classifier", classifier_path, "Classifier file")->required();
  sc->add_flag("--overwrite", overwrite, "Rescore turns that already carry gap scores");
  sc->add_flag("--raw", raw, "Use the raw S3+ output instead of the normalized posterior");
  add_shared(sc, shared);

  // parse
  auto* ps = app.add_subcommand("parse", "Parse a corpus");
  std::string grammar_path;
  GateOptions gate;
  ps->add_option("--grammar", grammar_path, "Grammar file")->required();
  ps->add_option("--corpus", corpus_path, "Corpus file")->required();
  gate.add(ps);
  add_shared(ps, shared);

  // eval
  auto* ev = app.add_subcommand("eval", "Score trace proposals or S3 recognition");
  std::string gold_path, proposed_path, task = "traces";
  bool exclude_final = false;
  double eval_threshold = -1;
  ev->add_option("--gold", gold_path, "Gold corpus")->required();
  ev->add_option("--proposed", proposed_path, "Parse report whose sites are the proposals");
  ev->add_option("--threshold", eval_threshold, "Propose gaps scoring at least this value")->check(CLI::Range(0.0, 1.0));
  ev->add_option("--task", task, "traces or s3")->check(CLI::IsMember({"traces", "s3"}))->capture_default_str();
  ev->add_option("--classifier", classifier_path, "Classifier for the s3 task (default: corpus gap scores)");
  ev->add_flag("--exclude-turn-final", exclude_final, "Drop each turn's final gap");
  add_shared(ev, shared);

  // rank
  auto* rk = app.add_subcommand("rank", "Rank of the gold trace gap by score");
  bool skip_invalid = false;
  rk->add_option("--corpus", corpus_path, "Scored corpus with one gold gap per turn")->required();
  rk->add_flag("--skip-invalid", skip_invalid, "Skip turns without exactly one gold gap");
  add_shared(rk, shared);

  // bench
  auto* bn = app.add_subcommand("bench", "Time the corpus with and without gating");
  std::size_t repeats = 1;
  bn->add_option("--grammar", grammar_path, "Grammar file")->required();
  bn->add_option("--corpus", corpus_path, "Corpus file")->required();
  gate.add(bn);
  bn->add_option("--repeats", repeats, "Passes per setting; totals are medians")->check(CLI::PositiveNumber);
  add_shared(bn, shared);

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  app.failure_message(CLI::FailureMessage::help);
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }
  const bool as_json = shared.format == "json";

  try {
    if (synth->parsed()) {
      sp.gold_traces = !no_gold;
      auto c = prosody::synth_corpus(shared.seed, sp);
      c.provenance["tool_version"] = kToolVersion;
      emit(shared, out, corpus::corpus_text(c));
      return 0;
    }

    if (trn->parsed()) {
      tp.hidden = parse_hidden(hidden);
      if (shared.out.empty()) throw CLI::ValidationError("train", "--out must name the classifier file");
      const std::string& model_out = shared.out;
      auto c = corpus::load_corpus(corpus_path);
      auto layout = layout_named(layout_name);
      std::vector<prosody::LabelledVector> data;
      for (const auto& t : c.turns)
        for (auto& lv : prosody::labelled_vectors(t, layout, false)) data.push_back(std::move(lv));
      prosody::TrainLog log;
      auto clf = prosody::train(data, layout, tp, shared.seed, &log);
      {
        std::ofstream f(model_out, std::ios::binary);
        if (!f) throw InputFormatError("cannot write " + model_out);
        f << clf.to_json().dump() << "\n";
      }
      Recognition rec;
      for (const auto& t : c.turns)
        for (const auto& lv : prosody::labelled_vectors(t, layout, true)) {
          if (lv.s3 == "S3?") continue;
          const bool said = clf.classify(lv.v).plus >= 0.5;
          if (lv.s3 == "S3+") {
            ++rec.s3_plus;
            rec.hit_plus += said;
          } else {
            ++rec.s3_minus;
            rec.hit_minus += !said;
          }
        }
      std::size_t np = 0, nm = 0;
      for (const auto& d : data) {
        if (d.s3 == "S3+") ++np;
        if (d.s3 == "S3-") ++nm;
      }
      json r{{"command", "train"},
             {"model", model_out},
             {"dims", clf.net.dims()},
             {"layout", layout.id},
             {"seed", shared.seed},
             {"epochs", tp.epochs},
             {"items", {{"S3+", np}, {"S3-", nm}}},
             {"presented_per_epoch", log.presented.front().first + log.presented.front().second},
             {"training_recognition", rec.balanced()}};
      std::string text = eval::detail::fmt("model %s: dims", model_out.c_str());
      for (auto d : clf.net.dims()) text += " " + std::to_string(d);
      text += eval::detail::fmt("\nlayout %s, seed %llu, %zu epochs\ntraining items: S3+ %zu, S3- %zu\n",
                                layout.id.c_str(), static_cast<unsigned long long>(shared.seed), tp.epochs, np, nm);
      text += eval::detail::fmt("training recognition (non-final gaps): %.1f %%\n", eval::percent(rec.balanced()));
      out << (as_json ? dump(r) : text);
      return 0;
    }

    if (sc->parsed()) {
      auto c = corpus::load_corpus(corpus_path);
      auto clf = prosody::MlpClassifier::from_json(read_json_file(classifier_path));
      std::size_t scored = 0, skipped = 0;
      for (auto& t : c.turns) {
        if (t.gap_scores && !overwrite) {
          ++skipped;
          continue;
        }
        if (raw) {
          std::vector<double> s;
          for (const auto& v : prosody::gap_vectors(t, clf.layout)) s.push_back(corpus::round_score(clf.raw(v).plus));
          t.gap_scores = s;
        } else {
          prosody::score_turn(clf, t);
        }
        ++scored;
      }
      emit(shared, out, corpus::corpus_text(c));
      if (!shared.out.empty()) {
        json r{{"command", "score"}, {"scored_turns", scored}, {"skipped_prescored", skipped}};
        out << (as_json ? dump(r) : eval::detail::fmt("scored %zu turns, kept %zu pre-scored turns\n", scored, skipped));
      }
      return 0;
    }

    if (ps->parsed()) {
      auto g = grammar::load_grammar_file(grammar_path);
      auto c = corpus::load_corpus(corpus_path);
      auto cfg = gate.config();
      json turns = json::array();
      std::string text;
      for (const auto& t : c.turns) {
        parser::ParseResult r;
        try {
          r = parser::parse(t, g, cfg);
        } catch (const Error& e) {
          throw ParseError("turn " + t.id + ": " + e.what());
        }
        turns.push_back(parser::turn_report(t, r));
        text += eval::detail::fmt("%s: %zu reading(s), %zu site(s), %zu empty edge(s)\n", t.id.c_str(),
                                  r.readings.size(), r.sites.size(), r.stats.empty_edges);
        for (std::size_t i = 0; i < r.readings.size(); ++i)
          text += "  " + r.readings[i].derivation + "\n    " + parser::to_string(parser::extract_pred_arg(r, i)) + "\n";
      }
      json report{{"command", "parse"}, {"config", config_json(cfg)}, {"turns", turns}};
      if (!shared.out.empty()) {
        emit(shared, out, dump(report));
        if (!as_json) out << text;
      } else {
        out << (as_json ? dump(report) : text);
      }
      return 0;
    }

    if (ev->parsed()) {
      auto gold = corpus::load_corpus(gold_path);
      json r{{"command", "eval"}, {"task", task}, {"exclude_turn_final", exclude_final}};
      std::string text;
      if (task == "traces") {
        if (proposed_path.empty() == (eval_threshold < 0))
          throw CLI::ValidationError("eval", "give exactly one of --proposed or --threshold");
        std::map<std::string, std::set<int>> proposed;
        if (!proposed_path.empty()) {
          auto rep = read_json_file(proposed_path);
          if (!rep.contains("turns") || !rep["turns"].is_array())
            throw InputFormatError(proposed_path + ": not a parse report (no turns array)");
          for (const auto& t : rep["turns"]) {
            if (!t.contains("id") || !t.contains("sites")) throw InputFormatError(proposed_path + ": turn without id or sites");
            for (const auto& s : t["sites"]) proposed[t["id"].get<std::string>()].insert(s.get<int>());
            proposed.try_emplace(t["id"].get<std::string>());
          }
        } else {
          parser::ParseConfig cfg;
          cfg.threshold = eval_threshold;
          for (const auto& t : gold.turns) {
            auto s = parser::propose_trace_sites(t, cfg);
            proposed[t.id] = std::set<int>(s.begin(), s.end());
          }
        }
        std::vector<eval::TurnGaps> turns;
        for (const auto& t : gold.turns) {
          if (!t.gold_traces) throw InputFormatError("turn " + t.id + ": field gold_traces: needed for evaluation");
          auto it = proposed.find(t.id);
          if (it == proposed.end()) throw InputFormatError("turn " + t.id + ": no proposals in " + proposed_path);
          eval::TurnGaps tg{t.id, {t.gold_traces->begin(), t.gold_traces->end()}, it->second,
                            eval::gap_universe(t.words.size(), exclude_final)};
          if (exclude_final) {
            tg.gold.erase(static_cast<int>(t.words.size()));
            tg.proposed.erase(static_cast<int>(t.words.size()));
          }
          turns.push_back(std::move(tg));
        }
        auto counts = eval::score_trace_hypotheses(turns);
        auto m = eval::metrics(counts);
        r["counts"] = eval::to_json(counts);
        r["metrics"] = eval::to_json(m);
        r["proposed_sites"] = counts.proposed();
        r["universe"] = counts.total();
        text = eval::format_confusion(counts) + "\n" + eval::format_metrics(m) +
               eval::detail::fmt("\nproposed %zu of %zu positions, %zu gold missed\n", counts.proposed(),
                                 counts.total(), counts.miss);
      } else {
        std::optional<prosody::MlpClassifier> clf;
        if (!classifier_path.empty()) clf = prosody::MlpClassifier::from_json(read_json_file(classifier_path));
        std::vector<eval::LabelSeq> ref, hyp;
        for (const auto& t : gold.turns) {
          if (!t.s3_labels) throw InputFormatError("turn " + t.id + ": field s3_labels: needed for the s3 task");
          std::vector<double> scores;
          if (clf) {
            for (const auto& v : prosody::gap_vectors(t, clf->layout)) scores.push_back(clf->classify(v).plus);
          } else {
            if (!t.gap_scores) throw InputFormatError("turn " + t.id + ": field gap_scores: needed without --classifier");
            scores = *t.gap_scores;
          }
          ref.push_back(*t.s3_labels);
          hyp.push_back(predicted_labels(scores));
        }
        auto tab = eval::crosstab(ref, hyp, exclude_final);
        Recognition rec{tab.row_total("S3+"), tab.row_total("S3-"), tab.count("S3+", "S3+"), tab.count("S3-", "S3-")};
        r["crosstab"] = eval::to_json(tab);
        r["recognition"] = rec.balanced();
        text = eval::format_crosstab(tab) +
               eval::detail::fmt("\nrecognition (mean of S3+ and S3- rates): %.1f %%\n", eval::percent(rec.balanced()));
      }
      emit(shared, out, as_json ? dump(r) : text);
      return 0;
    }

    if (rk->parsed()) {
      auto c = corpus::load_corpus(corpus_path);
      std::size_t skipped = 0;
      auto h = eval::rank_experiment(eval::rank_items(c, skip_invalid, &skipped));
      json r{{"command", "rank"}, {"histogram", eval::to_json(h)}, {"skipped_turns", skipped}};
      std::string text = eval::format_rank(h);
      if (skipped) text += eval::detail::fmt("skipped %zu turns without exactly one gold gap\n", skipped);
      emit(shared, out, as_json ? dump(r) : text);
      return 0;
    }

    if (bn->parsed()) {
      auto g = grammar::load_grammar_file(grammar_path);
      auto c = corpus::load_corpus(corpus_path);
      auto on = gate.config();
      parser::ParseConfig off = on;
      off.mode = parser::GateMode::threshold;
      off.threshold = 0.0;
      auto rep = eval::bench(c, g, on, off, repeats);
      json r = eval::to_json(rep);
      r["command"] = "bench";
      r["config_on"] = config_json(on);
      r["config_off"] = config_json(off);
      emit(shared, out, as_json ? dump(r) : eval::format_bench(rep));
      if (!rep.readings_identical()) {
        err << "error: reading sets differ between settings on turns:";
        for (const auto& id : rep.mismatched) err << " " << id;
        err << "\n";
        return 2;
      }
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

inline int run(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run(args);
}

}  // namespace prosogate::cli
