// Command-line surface for the monadic-datalog-on-trees toolkit.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mdlog/atm.hpp"
#include "mdlog/automata.hpp"
#include "mdlog/compilers.hpp"
#include "mdlog/datalog.hpp"
#include "mdlog/encoding.hpp"
#include "mdlog/engine.hpp"
#include "mdlog/oracles.hpp"
#include "mdlog/reductions.hpp"
#include "mdlog/trees.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void spit(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

mdlog::Schema schema_by_name_or_throw(const std::string& name) {
  auto s = mdlog::Schema::by_name(name);
  if (!s)
    throw std::runtime_error(
        "unknown schema " + name +
        " (expected tau_u, tau_u_desc, tau_u_root_leaf_desc, tau_o, tau_gk, tau_gk_child_desc)");
  return *s;
}

mdlog::TreeMode mode_by_name_or_throw(const std::string& name) {
  if (name == "ordered") return mdlog::TreeMode::Ordered;
  if (name == "unordered") return mdlog::TreeMode::Unordered;
  throw std::runtime_error("unknown mode " + name + " (expected ordered or unordered)");
}

mdlog::Alphabet alphabet_from_list(const std::string& list) {
  std::vector<std::string> syms;
  std::string cur;
  for (char c : list) {
    if (c == ',') {
      if (!cur.empty()) syms.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) syms.push_back(cur);
  return mdlog::Alphabet(syms);
}

mdlog::RankedAlphabet ranked_from_file(const std::string& path) {
  std::istringstream in(slurp(path));
  std::vector<std::pair<std::string, int>> entries;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('%');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string sym;
    int ar;
    if (ls >> sym >> ar) entries.push_back({sym, ar});
  }
  return mdlog::RankedAlphabet(entries);
}

std::string render_ranked(const mdlog::RankedAlphabet& ra) {
  std::ostringstream out;
  for (const auto& [sym, ar] : ra.entries) out << sym << ' ' << ar << '\n';
  return out.str();
}

std::string render_params(const mdlog::ReductionInstance& inst) {
  std::ostringstream out;
  out << "n " << inst.address_bits << "\n";
  out << "k " << inst.cells.k() << "\n";
  for (int i = 1; i <= inst.cells.k(); ++i)
    out << "cell " << i << " " << inst.cells.at(i).to_string() << "\n";
  return out.str();
}

mdlog::Atm load_machine(const std::string& path, bool normalize_flag) {
  mdlog::Atm atm = mdlog::parse_atm(slurp(path));
  if (normalize_flag) atm = mdlog::normalize(atm);
  if (!mdlog::is_normalized(atm))
    throw std::runtime_error("machine is not normalized (pass --normalize)");
  auto bad = mdlog::check_leftmost_halting(atm, 16, 6);
  if (!bad.empty())
    std::cerr << "warning: machine reaches a halting configuration with the head off the "
                 "leftmost cell within the checked bound: "
              << bad.front().to_string() << "\n";
  return atm;
}

int report_verdict(const mdlog::Verdict& v) {
  if (v.status == mdlog::VerdictStatus::Counterexample) {
    std::cout << mdlog::render_tree(*v.witness) << "\n";
    std::cout << "counterexample found (bound " << v.bound << ")\n";
    return 1;
  }
  std::cout << "holds up to bound " << v.bound << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"monadic datalog on finite labeled trees"};
  app.require_subcommand(1);

  // eval
  std::string program_path, tree_path, schema_name = "tau_u_desc", mode_name = "ordered";
  bool boolean_mode = false;
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a query on a tree");
  eval_cmd->add_option("--program", program_path)->required();
  eval_cmd->add_option("--tree", tree_path)->required();
  eval_cmd->add_option("--schema", schema_name);
  eval_cmd->add_option("--mode", mode_name);
  eval_cmd->add_flag("--boolean", boolean_mode);

  // compile-nta
  std::string nta_path, out_path;
  auto* compile_cmd = app.add_subcommand("compile-nta", "compile an NTA to a datalog query");
  compile_cmd->add_option("--nta", nta_path)->required();
  compile_cmd->add_option("-o,--output", out_path)->required();

  // translate-cq
  std::string cq_path;
  auto* cq_cmd = app.add_subcommand("translate-cq", "translate a Boolean CQ to datalog");
  cq_cmd->add_option("--cq", cq_path)->required();
  cq_cmd->add_option("-o,--output", out_path);

  // gen-emptiness / gen-containment
  std::string atm_path, out_dir;
  int address_bits = 2;
  bool normalize_flag = false;
  auto* gen_e = app.add_subcommand("gen-emptiness", "generate the emptiness hardness instance");
  gen_e->add_option("--atm", atm_path)->required();
  gen_e->add_option("--address-bits", address_bits)->required();
  gen_e->add_option("-o,--output", out_dir)->required();
  gen_e->add_flag("--normalize", normalize_flag);

  auto* gen_c = app.add_subcommand("gen-containment", "generate the containment hardness pair");
  gen_c->add_option("--atm", atm_path)->required();
  gen_c->add_option("--address-bits", address_bits)->required();
  gen_c->add_option("-o,--output", out_dir)->required();
  gen_c->add_flag("--normalize", normalize_flag);

  // encode-run
  int depth = 8;
  auto* enc_cmd =
      app.add_subcommand("encode-run", "search an accepting computation tree and encode it");
  enc_cmd->add_option("--atm", atm_path)->required();
  enc_cmd->add_option("--address-bits", address_bits)->required();
  enc_cmd->add_option("--depth", depth)->required();
  enc_cmd->add_option("-o,--output", out_path)->required();
  enc_cmd->add_flag("--normalize", normalize_flag);

  // check-containment / check-emptiness
  std::string q1_path, q2_path, alphabet_list, ranked_path;
  int max_nodes = 5;
  auto* cc_cmd = app.add_subcommand("check-containment", "bounded containment check");
  cc_cmd->add_option("--q1", q1_path)->required();
  cc_cmd->add_option("--q2", q2_path)->required();
  cc_cmd->add_option("--alphabet", alphabet_list)->required();
  cc_cmd->add_option("--schema", schema_name);
  cc_cmd->add_option("--mode", mode_name);
  cc_cmd->add_option("--max-nodes", max_nodes)->required();
  cc_cmd->add_option("--ranked", ranked_path);

  auto* ce_cmd = app.add_subcommand("check-emptiness", "bounded emptiness check");
  ce_cmd->add_option("--query", q1_path)->required();
  ce_cmd->add_option("--alphabet", alphabet_list)->required();
  ce_cmd->add_option("--schema", schema_name);
  ce_cmd->add_option("--mode", mode_name);
  ce_cmd->add_option("--max-nodes", max_nodes)->required();
  ce_cmd->add_option("--ranked", ranked_path);

  // enum-trees
  auto* et_cmd = app.add_subcommand("enum-trees", "enumerate trees up to a node bound");
  et_cmd->add_option("--alphabet", alphabet_list)->required();
  et_cmd->add_option("--max-nodes", max_nodes)->required();
  et_cmd->add_option("--mode", mode_name);
  et_cmd->add_option("--ranked", ranked_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*eval_cmd) {
      auto q = mdlog::parse_program(slurp(program_path));
      auto t = mdlog::parse_tree(slurp(tree_path));
      auto schema = schema_by_name_or_throw(schema_name);
      auto mode = mode_by_name_or_throw(mode_name);
      if (boolean_mode) {
        std::cout << (mdlog::eval_boolean(q, t, schema, mode) ? "yes" : "no") << "\n";
      } else {
        auto nodes = mdlog::eval_unary(q, t, schema, mode);
        bool first = true;
        for (auto v : nodes) {
          if (!first) std::cout << ' ';
          std::cout << v;
          first = false;
        }
        std::cout << "\n";
      }
      return 0;
    }
    if (*compile_cmd) {
      auto nta = mdlog::parse_nta(slurp(nta_path));
      spit(out_path, mdlog::render_program(mdlog::compile_nta(nta)));
      return 0;
    }
    if (*cq_cmd) {
      auto cq = mdlog::parse_cq(slurp(cq_path));
      auto q = mdlog::translate_cq(cq);
      if (out_path.empty())
        std::cout << mdlog::render_program(q);
      else
        spit(out_path, mdlog::render_program(q));
      return 0;
    }
    if (*gen_e || *gen_c) {
      auto atm = load_machine(atm_path, normalize_flag);
      std::filesystem::create_directories(out_dir);
      if (*gen_e) {
        auto inst = mdlog::gen_emptiness_query(atm, address_bits);
        spit(out_dir + "/alphabet.txt", render_ranked(inst.sigma_ranked));
        spit(out_dir + "/q.dl", mdlog::render_program(inst.q1));
        spit(out_dir + "/params.txt", render_params(inst));
      } else {
        auto inst = mdlog::gen_containment_pair(atm, address_bits);
        spit(out_dir + "/alphabet.txt", render_ranked(inst.sigma_ranked));
        spit(out_dir + "/q1.dl", mdlog::render_program(inst.q1));
        spit(out_dir + "/q2.dl", mdlog::render_program(*inst.q2));
        spit(out_dir + "/params.txt", render_params(inst));
      }
      return 0;
    }
    if (*enc_cmd) {
      auto atm = load_machine(atm_path, normalize_flag);
      auto tree = mdlog::search_accepting_tree(atm, depth, address_bits);
      if (!tree) {
        std::cout << "no accepting computation tree within depth " << depth << "\n";
        return 1;
      }
      auto ca = mdlog::cell_alphabet(atm);
      spit(out_path, mdlog::render_tree(mdlog::encode(*tree, address_bits, ca)) + "\n");
      return 0;
    }
    if (*cc_cmd || *ce_cmd) {
      auto schema = schema_by_name_or_throw(schema_name);
      auto mode = mode_by_name_or_throw(mode_name);
      auto alphabet = alphabet_from_list(alphabet_list);
      std::optional<mdlog::RankedAlphabet> ranked;
      if (!ranked_path.empty()) ranked = ranked_from_file(ranked_path);
      if (*cc_cmd) {
        auto q1 = mdlog::parse_program(slurp(q1_path));
        auto q2 = mdlog::parse_program(slurp(q2_path));
        return report_verdict(mdlog::check_containment_bounded(q1, q2, alphabet, schema, mode,
                                                               max_nodes, ranked));
      }
      auto q = mdlog::parse_program(slurp(q1_path));
      return report_verdict(
          mdlog::check_emptiness_bounded(q, alphabet, schema, mode, max_nodes, ranked));
    }
    if (*et_cmd) {
      auto mode = mode_by_name_or_throw(mode_name);
      auto alphabet = alphabet_from_list(alphabet_list);
      std::optional<mdlog::RankedAlphabet> ranked;
      if (!ranked_path.empty()) ranked = ranked_from_file(ranked_path);
      mdlog::TreeEnumerator en(alphabet, max_nodes, mode, ranked);
      while (auto t = en.next()) std::cout << mdlog::render_tree(*t) << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
