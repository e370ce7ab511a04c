#include "modelforge/api/ce.hpp"
#include "modelforge/api/server.hpp"
#include "modelforge/api/workbench.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include <unistd.h>

using namespace modelforge;
namespace fs = std::filesystem;

namespace {

api::Server* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

// Bundled data: $MODELFORGE_DATA, then the source tree, then the install prefix.
fs::path data_dir() {
  if (const char* env = std::getenv("MODELFORGE_DATA")) return env;
  for (const fs::path& p : {fs::path(MODELFORGE_SOURCE_DATA_DIR), fs::path(MODELFORGE_INSTALL_DATA_DIR)}) {
    if (fs::exists(p / "ontology.graph")) return p;
  }
  return MODELFORGE_INSTALL_DATA_DIR;
}

std::vector<std::string> read_ignore_file(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) {
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    out.push_back(line.substr(b, line.find_last_not_of(" \t\r") + 1 - b));
  }
  return out;
}

void print_report(const api::IngestReport& r) {
  std::cout << r.documents.size() << " file(s), " << r.created.size() << " new item(s), " << r.refreshed.size()
            << " refreshed";
  if (!r.auto_aligned.empty()) std::cout << ", " << r.auto_aligned.size() << " concept(s) aligned automatically";
  std::cout << "\n";
  for (const auto& s : r.skipped) std::cout << "  skipped " << s << "\n";
}

int run_repl(api::Workbench& wb, std::istream& in, bool prompt) {
  std::string buffer;
  int failures = 0;
  if (prompt) std::cout << "> " << std::flush;
  for (std::string line; std::getline(in, line);) {
    buffer += line + "\n";
    auto cmds = api::split_commands(buffer);
    buffer.clear();
    for (const auto& cmd : cmds) {
      if (cmd.back() != '.') {
        buffer = cmd + "\n";  // wait for the terminating period
        continue;
      }
      try {
        std::cout << api::run_ce(wb, api::parse_ce(cmd, &wb)) << "\n";
      } catch (const api::ApiError& e) {
        ++failures;
        std::cout << api::error_code_name(e.code()) << ": " << e.what() << "\n";
      }
    }
    if (prompt) std::cout << (buffer.empty() ? "> " : ". ") << std::flush;
  }
  if (!buffer.empty() && buffer.find_first_not_of(" \t\r\n") != std::string::npos) {
    ++failures;
    std::cout << "CEParseError: command does not end with '.'\n";
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extract, curate and run computable models from code and text."};
  app.set_version_flag("--version", std::string(api::kVersion));
  app.require_subcommand(1);

  fs::path store = "modelforge-store";
  fs::path data = data_dir();
  fs::path ontology, vocab;
  app.add_option("--store", store, "Store directory (created when missing)")->capture_default_str();
  app.add_option("--ontology", ontology, "Domain ontology that seeds a new store");
  app.add_option("--vocab", vocab, "Vocabulary snapshot used for alignment");

  std::vector<fs::path> code_paths;
  fs::path ignore_file;
  std::vector<std::string> ignore_classes;
  auto* ingest_code = app.add_subcommand("ingest-code", "Extract methods from Java-style sources");
  ingest_code->add_option("paths", code_paths, "Files or directories")->required();
  ingest_code->add_option("--ignore", ignore_file, "File listing classes or packages to leave out, one per line");
  ingest_code->add_option("--ignore-class", ignore_classes, "Class or package to leave out");

  std::vector<fs::path> text_paths;
  auto* ingest_text = app.add_subcommand("ingest-text", "Extract equations and concepts from text pages");
  ingest_text->add_option("paths", text_paths, "Files or directories")->required();

  std::string target;
  std::vector<std::string> given;
  auto* compute = app.add_subcommand("compute", "Compose curated models to compute a concept");
  compute->add_option("target", target, "Concept to compute, e.g. MachNumber")->required();
  compute->add_option("--given", given, "Known value as name=value; the name is a concept or a model variable");

  std::string host = "127.0.0.1";
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--host", host)->capture_default_str();
  serve->add_option("--port", port, "0 picks a free port")->capture_default_str();

  fs::path script;
  auto* repl = app.add_subcommand("repl", "Controlled-English session on standard input");
  repl->add_option("--script", script, "Read commands from a file instead");

  std::string command;
  auto* ce = app.add_subcommand("ce", "Run controlled-English commands given as one argument");
  ce->add_option("commands", command)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    api::WorkbenchConfig config{store, ontology.empty() ? data / "ontology.graph" : ontology,
                                vocab.empty() ? data / "vocab.tsv" : vocab, false};
    api::Workbench wb(config);

    if (*ingest_code) {
      if (!ignore_file.empty()) {
        auto more = read_ignore_file(ignore_file);
        ignore_classes.insert(ignore_classes.end(), more.begin(), more.end());
      }
      print_report(wb.ingest_code(code_paths, ignore_classes));
    } else if (*ingest_text) {
      print_report(wb.ingest_text(text_paths));
    } else if (*compute) {
      api::ce::Compute stmt{target, {}};
      for (const auto& g : given) {
        auto eq = g.find('=');
        if (eq == std::string::npos) throw std::runtime_error("--given expects name=value, got " + g);
        stmt.bindings.emplace_back(g.substr(0, eq), std::stod(g.substr(eq + 1)));
      }
      std::cout << api::run_ce(wb, stmt) << "\n";
    } else if (*serve) {
      api::Server server(wb);
      int bound = server.bind(host, port);
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cout << "listening on http://" << host << ":" << bound << std::endl;
      server.run();
      g_server = nullptr;
      wb.wait_idle();
    } else if (*repl) {
      if (!script.empty()) {
        std::ifstream in(script);
        if (!in) throw std::runtime_error("cannot read " + script.string());
        return run_repl(wb, in, false);
      }
      return run_repl(wb, std::cin, isatty(0));
    } else if (*ce) {
      std::istringstream in(command);
      return run_repl(wb, in, false);
    }
  } catch (const api::ApiError& e) {
    std::cerr << api::error_code_name(e.code()) << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
