#pragma once

// The `suffacts` command: one subcommand per pipeline stage, all reading and
// writing UTF-8 JSONL. Exit codes: 0 success, 1 validation error, 2 I/O
// error, 64 usage error.

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include <CLI11.hpp>

#include "suffacts/augment.hpp"
#include "suffacts/corpus.hpp"
#include "suffacts/evaluate.hpp"
#include "suffacts/lossmath.hpp"
#include "suffacts/omission.hpp"
#include "suffacts/parallel.hpp"
#include "suffacts/syntax.hpp"
#include "suffacts/text.hpp"

namespace suffacts::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitUsage = 64;

inline const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> k{"omit",  "dates", "distract", "filter", "assemble", "cad",     "irrelevant",
                                          "vote",  "score", "agree",    "types",  "overlap",  "losscheck"};
  return k;
}

struct PipelineConfig {
  std::optional<Dataset> dataset;
  double tau = loss::kDefaultTau;
  std::size_t negatives_cap = kDefaultNegativesCap;
  std::string stopword_path;
  std::uint64_t seed = 13;
};

namespace detail {

inline std::set<OmissionType> parse_types(const std::string& csv) {
  std::set<OmissionType> out;
  for (const auto& t : text::split(csv, ',')) out.insert(parse_omission_type(t));
  if (out.empty()) throw ValidationError("no omission types given");
  return out;
}

inline std::optional<Dataset> optional_dataset(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return parse_dataset(s);
}

// Predictions of one model keyed by instance id. With an empty `model`, the
// file must hold exactly one model, or three, which are majority-voted.
inline std::unordered_map<std::string, VeracityLabel> select_labels(const std::vector<PredictionRecord>& records,
                                                                    const std::string& model) {
  std::unordered_map<std::string, VeracityLabel> out;
  if (!model.empty()) {
    for (const auto& r : records)
      if (r.model_id == model) out.emplace(r.instance_id, r.predicted);
    if (out.empty()) throw ValidationError("no predictions from model " + model);
    return out;
  }
  std::set<std::string> models;
  for (const auto& r : records) models.insert(r.model_id);
  if (models.size() == 1) {
    for (const auto& r : records) out.emplace(r.instance_id, r.predicted);
    return out;
  }
  if (models.size() != 3)
    throw ValidationError("prediction file holds " + std::to_string(models.size()) +
                          " models; pass --model or provide exactly three for the ensemble");
  for (const auto& [id, recs] : index_predictions(records)) out.emplace(id, majority_vote(recs));
  return out;
}

inline Json type_accuracy_json(const eval::TypeAccuracy& a) {
  auto opt = [](std::optional<double> v) { return v ? Json(*v) : Json(nullptr); };
  return Json{{"nei_correct", opt(a.nei_correct())},
              {"ei_correct", opt(a.ei_correct())},
              {"nei_total", a.nei_total},
              {"ei_total", a.ei_total}};
}

inline Json matrix_json(const eval::AgreementMatrix& m) {
  Json rows = Json::object();
  for (std::size_t r = 0; r < 3; ++r) {
    Json row = Json::object();
    for (std::size_t c = 0; c < 3; ++c) row[eval::kColumnNames[c]] = m.counts[r][c];
    rows[eval::kRowNames[r]] = row;
  }
  Json total = Json::object();
  for (std::size_t c = 0; c < 3; ++c) total[eval::kColumnNames[c]] = m.column_total(c);
  rows["Total"] = total;
  return rows;
}

inline void matrix_rows(const std::string& name, const eval::AgreementMatrix& m,
                        std::vector<std::vector<std::string>>& rows) {
  for (std::size_t r = 0; r < 3; ++r)
    rows.push_back({r == 0 ? name : "", eval::kRowNames[r], std::to_string(m.counts[r][0]),
                    std::to_string(m.counts[r][1]), std::to_string(m.counts[r][2])});
  rows.push_back({"", "Total", std::to_string(m.column_total(0)), std::to_string(m.column_total(1)),
                  std::to_string(m.column_total(2))});
}

inline std::string file_stem(const std::string& path) {
  auto slash = path.find_last_of('/');
  std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
  auto dot = base.find('.');
  return dot == std::string::npos ? base : base.substr(0, dot);
}

inline std::string opt_fixed(std::optional<double> v) { return v ? eval::fixed(*v) : "-"; }

}  // namespace detail

inline std::string usage() {
  std::string s = "usage: suffacts <subcommand> [options]\n\nsubcommands:\n";
  for (const auto& c : subcommands()) s += "  " + c + "\n";
  s += "\nRun `suffacts <subcommand> --help` for the options of a subcommand.\n";
  return s;
}

// Runs the command line `argv` (argv[0] is the program name).
inline int run(const std::vector<std::string>& argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  if (argv.size() < 2 || std::find(subcommands().begin(), subcommands().end(), argv[1]) == subcommands().end()) {
    if (argv.size() >= 2 && (argv[1] == "--help" || argv[1] == "-h")) {
      out << usage();
      return kExitOk;
    }
    err << (argv.size() < 2 ? std::string("missing subcommand\n") : "unknown subcommand: " + argv[1] + "\n") << usage();
    return kExitUsage;
  }

  CLI::App app{"Evidence-sufficiency data toolkit", "suffacts"};
  app.require_subcommand(1);
  PipelineConfig cfg;
  std::string dataset_s, instances, parses, types_s = "SENT,PP,NOUNM,ADJM,ADVM,NUMM,DATEM,SBAR", out_path, documents,
                                                  candidates, predictions, train_model, distractors, groups, model,
                                                  format = "json", embeddings, aggregate = "all";
  std::vector<std::string> diagnostics;
  std::size_t sample = 0, jobs = 1, dim = 8;
  int trials = 100;
  double eps = 1e-5;
  bool predicted_nei = false;

  auto add_out = [&](CLI::App* c) { c->add_option("--out", out_path, "Output JSONL file")->required(); };
  auto add_format = [&](CLI::App* c) {
    c->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "table"}));
  };

  auto* omit = app.add_subcommand("omit", "Generate evidence-omission candidates");
  omit->add_option("--instances", instances, "Instance JSONL")->required();
  omit->add_option("--parses", parses, "Parse JSONL (needed for constituent types)");
  omit->add_option("--types", types_s, "Comma-separated omission types");
  omit->add_option("--dataset", dataset_s, "Expected dataset");
  omit->add_option("--sample", sample, "Keep at most N candidates per instance (0 keeps all)");
  omit->add_option("--seed", cfg.seed, "Seed for --sample");
  omit->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  add_out(omit);

  auto* dates_cmd = app.add_subcommand("dates", "Generate date-modifier candidates only");
  dates_cmd->add_option("--instances", instances, "Instance JSONL")->required();
  dates_cmd->add_option("--dataset", dataset_s, "Expected dataset");
  add_out(dates_cmd);

  auto* distract = app.add_subcommand("distract", "Mine one distractor sentence per instance");
  distract->add_option("--instances", instances, "Instance JSONL")->required();
  distract->add_option("--documents", documents, "Document JSONL {title, sentences}")->required();
  distract->add_option("--dataset", dataset_s, "Expected dataset");
  add_out(distract);

  auto* filter = app.add_subcommand("filter", "Keep candidates both other models predict as NEI");
  filter->add_option("--candidates", candidates, "Candidate JSONL")->required();
  filter->add_option("--predictions", predictions, "Prediction JSONL keyed by candidate id")->required();
  filter->add_option("--train-model", train_model, "Model being trained; its predictions are ignored");
  add_out(filter);

  auto* assemble = app.add_subcommand("assemble", "Build contrastive groups");
  assemble->add_option("--instances", instances, "Instance JSONL")->required();
  assemble->add_option("--candidates", candidates, "Filtered candidate JSONL")->required();
  assemble->add_option("--distractors", distractors, "Distractor JSONL from `distract`")->required();
  assemble->add_option("--cap", cfg.negatives_cap, "Maximum omission negatives per group");
  assemble->add_option("--dataset", dataset_s, "Expected dataset");
  add_out(assemble);

  auto* cad = app.add_subcommand("cad", "Emit counterfactually augmented training instances");
  cad->add_option("--groups", groups, "Group JSONL")->required();
  cad->add_option("--dataset", dataset_s, "Dataset of the groups")->required();
  add_out(cad);

  auto* irrelevant = app.add_subcommand("irrelevant", "Pair every claim with another claim's closest evidence");
  irrelevant->add_option("--instances", instances, "Instance JSONL")->required();
  irrelevant->add_option("--dataset", dataset_s, "Expected dataset");
  add_out(irrelevant);

  auto* vote = app.add_subcommand("vote", "Majority-vote three models' predictions");
  vote->add_option("--predictions", predictions, "Prediction JSONL with three models")->required();
  add_out(vote);

  auto* score = app.add_subcommand("score", "Macro-F1 and NEI rate of predictions");
  score->add_option("--predictions", predictions, "Prediction JSONL")->required();
  auto* score_inst = score->add_option("--instances", instances, "Gold instance JSONL");
  auto* score_diag = score->add_option("--diagnostics", diagnostics, "Gold diagnostic JSONL")->expected(1);
  score_inst->excludes(score_diag);
  score->add_option("--model", model, "Model to score (default: the only model, or the 3-model vote)");
  add_format(score);

  auto* agree = app.add_subcommand("agree", "Model agreement vs. human annotation, per file and in total");
  agree->add_option("--diagnostics", diagnostics, "Diagnostic JSONL files, one per split")->required();
  agree->add_option("--predictions", predictions, "Prediction JSONL with three models")->required();
  add_format(agree);

  auto* types = app.add_subcommand("types", "Accuracy by omission type");
  types->add_option("--diagnostics", diagnostics, "Diagnostic JSONL")->required()->expected(1);
  types->add_option("--predictions", predictions, "Prediction JSONL")->required();
  types->add_option("--model", model, "Score a single model instead of the ensemble");
  types->add_option("--aggregate", aggregate, "Ensemble rule: all (all three correct) or vote (majority)")
      ->check(CLI::IsMember({"all", "vote"}));
  add_format(types);

  auto* overlap = app.add_subcommand("overlap", "Mean claim-evidence content-token overlap");
  auto* ov_inst = overlap->add_option("--instances", instances, "Instance JSONL");
  auto* ov_diag = overlap->add_option("--diagnostics", diagnostics, "Diagnostic JSONL")->expected(1);
  ov_inst->excludes(ov_diag);
  overlap->add_option("--predictions", predictions, "Prediction JSONL used with --predicted-nei");
  overlap->add_option("--model", model, "Model for --predicted-nei");
  overlap->add_flag("--predicted-nei", predicted_nei, "Only instances predicted NEI-class");
  overlap->add_option("--stopwords", cfg.stopword_path, "Stop-word file (default: $SUFFACTS_STOPWORDS or built-in)");
  add_format(overlap);

  auto* losscheck = app.add_subcommand("losscheck", "Finite-difference check of the loss gradients");
  losscheck->add_option("--dim", dim, "Embedding dimension for random trials")->check(CLI::PositiveNumber);
  losscheck->add_option("--trials", trials, "Random trials")->check(CLI::NonNegativeNumber);
  losscheck->add_option("--eps", eps, "Finite-difference step")->check(CLI::Range(1e-7, 1e-3));
  losscheck->add_option("--tau", cfg.tau, "Temperature subtracted from the cosine");
  losscheck->add_option("--seed", cfg.seed, "Random seed");
  losscheck->add_option("--embeddings", embeddings, "Embedding JSONL; checks pooled groups instead of random inputs");

  std::vector<const char*> cargv;
  for (const auto& a : argv) cargv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    cfg.dataset = detail::optional_dataset(dataset_s);

    if (omit->parsed() || dates_cmd->parsed()) {
      const auto wanted = omit->parsed() ? detail::parse_types(types_s) : std::set<OmissionType>{OmissionType::DateM};
      const bool need_parses = std::any_of(wanted.begin(), wanted.end(),
                                           [](OmissionType t) { return constituent_types().count(t) > 0; });
      if (need_parses && parses.empty()) throw ValidationError("constituent omission types need --parses");
      ParseIndex index;
      if (need_parses) index = read_parses(parses);
      const auto insts = read_instances(instances, cfg.dataset);
      auto per_instance = parallel_map(insts, jobs, [&](const Instance& inst) {
        std::optional<std::vector<ConstTree>> trees;
        if (need_parses) trees = parses_for(inst, index);
        auto c = generate(inst, trees ? &*trees : nullptr, wanted);
        if (sample > 0) c = sample_candidates(std::move(c), sample, cfg.seed);
        return c;
      });
      JsonlWriter w(out_path);
      for (const auto& cs : per_instance)
        for (const auto& c : cs) {
          Json j;
          to_json(j, c);
          w.write(j);
        }
      err << "wrote " << w.close() << " candidates for " << insts.size() << " instances\n";
      return kExitOk;
    }

    if (distract->parsed()) {
      const auto docs = read_documents(documents);
      JsonlWriter w(out_path);
      std::size_t skipped = 0;
      InstanceStream stream(instances, cfg.dataset);
      while (auto inst = stream.next()) {
        // Multi-document evidence draws from the first gold sentence's page.
        if (inst->evidence.empty()) {
          ++skipped;
          continue;
        }
        auto it = docs.find(inst->evidence.front().doc_title);
        if (it == docs.end()) {
          ++skipped;
          continue;
        }
        try {
          w.write(Json{{"instance_id", inst->id}, {"distractor", mine_distractor(*inst, it->second)}});
        } catch (const ValidationError&) {
          ++skipped;
        }
      }
      err << "wrote " << w.close() << " distractors; skipped " << skipped << " instances\n";
      return kExitOk;
    }

    if (filter->parsed()) {
      auto index = index_predictions(read_predictions(predictions));
      if (!train_model.empty()) index = without_model(index, train_model);
      const auto cands = read_candidates(candidates);
      const auto kept = filter_negatives(cands, index);
      const auto n = write_jsonl(kept, out_path);
      err << "kept " << n << " of " << cands.size() << " candidates\n";
      return kExitOk;
    }

    if (assemble->parsed()) {
      std::unordered_map<std::string, std::vector<OmissionCandidate>> by_base;
      for (auto& c : read_candidates(candidates)) by_base[c.base_id].push_back(std::move(c));
      std::unordered_map<std::string, std::string> distractor_of;
      {
        JsonlReader r(distractors);
        while (auto j = r.next()) {
          const auto where = suffacts::detail::where(r);
          distractor_of[suffacts::detail::get_string(*j, "instance_id", where)] =
              suffacts::detail::get_string(*j, "distractor", where);
        }
      }
      JsonlWriter w(out_path);
      std::size_t nei_skipped = 0, no_distractor = 0;
      InstanceStream stream(instances, cfg.dataset);
      while (auto inst = stream.next()) {
        if (inst->label.is_nei()) {
          ++nei_skipped;
          continue;
        }
        auto d = distractor_of.find(inst->id);
        if (d == distractor_of.end()) {
          ++no_distractor;
          continue;
        }
        auto it = by_base.find(inst->id);
        static const std::vector<OmissionCandidate> kNone;
        Json j;
        to_json(j, assemble_group(*inst, it == by_base.end() ? kNone : it->second, d->second, cfg.negatives_cap));
        w.write(j);
      }
      err << "wrote " << w.close() << " groups (negatives cap " << cfg.negatives_cap << "); skipped " << nei_skipped
          << " NEI-class and " << no_distractor << " distractor-less instances\n";
      return kExitOk;
    }

    if (cad->parsed()) {
      const auto n = write_jsonl(emit_cad(read_groups(groups), *cfg.dataset), out_path);
      err << "wrote " << n << " augmented instances\n";
      return kExitOk;
    }

    if (irrelevant->parsed()) {
      const auto insts = read_instances(instances, cfg.dataset);
      const auto n = write_jsonl(build_incorrect_evidence_set(insts), out_path);
      err << "wrote " << n << " instances with incorrect evidence\n";
      return kExitOk;
    }

    if (vote->parsed()) {
      const auto records = read_predictions(predictions);
      auto index = index_predictions(records);
      std::vector<std::string> order;
      std::set<std::string> seen;
      for (const auto& r : records)
        if (seen.insert(r.instance_id).second) order.push_back(r.instance_id);
      std::vector<PredictionRecord> votes;
      for (const auto& id : order) votes.push_back(vote_record(index.at(id)));
      err << "wrote " << write_jsonl(votes, out_path) << " ensemble predictions\n";
      return kExitOk;
    }

    if (score->parsed()) {
      std::vector<std::string> ids;
      std::vector<VeracityLabel> golds;
      std::optional<LabelSpace> space;
      if (!instances.empty()) {
        for (const auto& inst : read_instances(instances)) {
          ids.push_back(inst.id);
          golds.push_back(inst.label);
        }
      } else if (!diagnostics.empty()) {
        const auto diags = read_diagnostics(diagnostics.front());
        ids = diagnostic_ids(diags);
        for (const auto& d : diags) golds.push_back(d.new_label);
      } else {
        throw ValidationError("score needs --instances or --diagnostics");
      }
      if (golds.empty()) throw ValidationError("no gold labels");
      space = golds.front().space;
      const auto labels = detail::select_labels(read_predictions(predictions), model);
      std::vector<VeracityLabel> preds;
      for (std::size_t i = 0; i < ids.size(); ++i) {
        auto it = labels.find(ids[i]);
        if (it == labels.end()) throw ValidationError("no prediction for " + ids[i]);
        if (it->second.space != *space || golds[i].space != *space)
          throw ValidationError("prediction for " + ids[i] + " is in a different label space");
        preds.push_back(it->second);
      }
      const int m = label_count(*space);
      const auto f1 = eval::macro_f1_detailed(golds, preds, m);
      for (int k : f1.absent_classes)
        err << "warning: class " << VeracityLabel{*space, k}.name() << " absent from gold and predictions; F1 = 0\n";
      std::size_t nei = 0, correct = 0;
      for (std::size_t i = 0; i < preds.size(); ++i) {
        nei += preds[i].is_nei();
        correct += preds[i] == golds[i];
      }
      const double nei_rate = static_cast<double>(nei) / static_cast<double>(preds.size());
      const double acc = static_cast<double>(correct) / static_cast<double>(preds.size());
      if (format == "json") {
        out << Json{{"n", preds.size()}, {"macro_f1", f1.value}, {"accuracy", acc}, {"nei_rate", nei_rate}}.dump() << "\n";
      } else {
        out << eval::format_table({{"metric", "value"},
                                   {"n", std::to_string(preds.size())},
                                   {"macro_f1", eval::fixed(f1.value)},
                                   {"accuracy", eval::fixed(acc)},
                                   {"nei_rate", eval::fixed(nei_rate)}});
      }
      return kExitOk;
    }

    if (agree->parsed()) {
      const auto index = index_predictions(read_predictions(predictions));
      eval::AgreementMatrix total;
      Json splits = Json::object();
      std::vector<std::vector<std::string>> rows{{"split", "model pred", "EI_I", "EI_R", "NEI"}};
      for (const auto& path : diagnostics) {
        const auto m = eval::agreement_table(eval::agreement_records(read_diagnostics(path), index));
        total += m;
        splits[detail::file_stem(path)] = detail::matrix_json(m);
        detail::matrix_rows(detail::file_stem(path), m, rows);
      }
      detail::matrix_rows("Total", total, rows);
      if (format == "json") out << Json{{"splits", splits}, {"total", detail::matrix_json(total)}}.dump() << "\n";
      else out << eval::format_table(rows);
      return kExitOk;
    }

    if (types->parsed()) {
      const auto diags = read_diagnostics(diagnostics.front());
      const auto records = read_predictions(predictions);
      std::map<OmissionType, eval::TypeAccuracy> acc;
      if (!model.empty() || aggregate == "vote") acc = eval::per_type_accuracy(diags, detail::select_labels(records, model));
      else acc = eval::per_type_accuracy_all(diags, index_predictions(records));
      if (format == "json") {
        Json j = Json::object();
        for (const auto& [t, a] : acc) j[std::string(omission_type_name(t))] = detail::type_accuracy_json(a);
        out << j.dump() << "\n";
      } else {
        std::vector<std::vector<std::string>> rows{{"type", "NEI correct", "n NEI", "EI correct", "n EI"}};
        for (const auto& [t, a] : acc)
          rows.push_back({std::string(omission_type_name(t)), detail::opt_fixed(a.nei_correct()),
                          std::to_string(a.nei_total), detail::opt_fixed(a.ei_correct()), std::to_string(a.ei_total)});
        out << eval::format_table(rows);
      }
      return kExitOk;
    }

    if (overlap->parsed()) {
      std::vector<std::string> ids;
      std::vector<std::pair<std::string, std::string>> pairs;
      if (!instances.empty()) {
        for (const auto& inst : read_instances(instances)) {
          ids.push_back(inst.id);
          pairs.emplace_back(inst.claim, evidence_text(inst));
        }
      } else if (!diagnostics.empty()) {
        const auto diags = read_diagnostics(diagnostics.front());
        ids = diagnostic_ids(diags);
        for (const auto& d : diags) pairs.emplace_back(d.claim, eval::strip_titles(d.reduced_evidence));
      } else {
        throw ValidationError("overlap needs --instances or --diagnostics");
      }
      if (predicted_nei) {
        if (predictions.empty()) throw ValidationError("--predicted-nei needs --predictions");
        const auto labels = detail::select_labels(read_predictions(predictions), model);
        std::vector<std::pair<std::string, std::string>> kept;
        for (std::size_t i = 0; i < ids.size(); ++i) {
          auto it = labels.find(ids[i]);
          if (it == labels.end()) throw ValidationError("no prediction for " + ids[i]);
          if (it->second.is_nei()) kept.push_back(pairs[i]);
        }
        pairs = std::move(kept);
      }
      const auto stats = eval::overlap_stats(pairs, text::resolve_stopwords(cfg.stopword_path));
      if (stats.skipped) err << "skipped " << stats.skipped << " instances whose claim has no content tokens\n";
      if (format == "json") {
        out << Json{{"mean_overlap", stats.mean_overlap}, {"instances", stats.used}, {"skipped", stats.skipped}}.dump()
            << "\n";
      } else {
        out << eval::format_table({{"metric", "value"},
                                   {"mean_overlap", eval::fixed(stats.mean_overlap)},
                                   {"instances", std::to_string(stats.used)},
                                   {"skipped", std::to_string(stats.skipped)}});
      }
      return kExitOk;
    }

    if (losscheck->parsed()) {
      if (embeddings.empty()) {
        const auto rep = loss::random_grad_trials(dim, trials, eps, cfg.tau, cfg.seed);
        out << Json{{"max_rel_error", rep.max_rel_error}, {"trials", rep.trials}}.dump() << "\n";
        return kExitOk;
      }
      // Pool every record, then check each anchor's group.
      struct Group {
        std::optional<loss::Vector> anchor, positive;
        std::vector<loss::Vector> negatives;
      };
      std::map<std::string, Group> by_id;
      for (const auto& rec : loss::read_embeddings(embeddings)) {
        auto& g = by_id[rec.instance_id];
        auto pooled = loss::mean_pool(rec);
        switch (rec.role) {
          case loss::Role::Anchor:
            if (g.anchor) throw ValidationError("two anchors for " + rec.instance_id);
            g.anchor = std::move(pooled);
            break;
          case loss::Role::Positive:
            if (g.positive) throw ValidationError("two positives for " + rec.instance_id);
            g.positive = std::move(pooled);
            break;
          case loss::Role::Negative: g.negatives.push_back(std::move(pooled)); break;
        }
      }
      double worst = 0.0;
      int checked = 0;
      Json losses = Json::array();
      for (const auto& [id, g] : by_id) {
        if (!g.anchor || !g.positive) throw ValidationError("embedding group " + id + " lacks an anchor or positive");
        const auto r = loss::contrastive_loss(*g.anchor, *g.positive, g.negatives, cfg.tau);
        losses.push_back(Json{{"instance_id", id}, {"loss", r.loss}, {"k_negatives", g.negatives.size()}});
        std::vector<loss::Vector> in{*g.anchor, *g.positive};
        in.insert(in.end(), g.negatives.begin(), g.negatives.end());
        worst = std::max(worst, loss::grad_check(loss::contrastive_objective(cfg.tau), in, eps));
        ++checked;
      }
      out << Json{{"max_rel_error", worst}, {"trials", checked}, {"losses", losses}}.dump() << "\n";
      return kExitOk;
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  err << usage();
  return kExitUsage;
}

}  // namespace suffacts::cli
