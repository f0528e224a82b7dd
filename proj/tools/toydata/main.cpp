#include <iostream>

#include <CLI11.hpp>

#include "duet/error.hpp"
#include "toy_data.hpp"

int main(int argc, char** argv) {
  CLI::App app{"write a small synthetic triples/candidates/qrels set", "make_toy_data"};
  std::string dir;
  toydata::ToyOptions options;
  app.add_option("dir", dir, "output directory")->required();
  app.add_option("--triples", options.train_triples, "training triples")->capture_default_str();
  app.add_option("--queries", options.dev_queries, "dev queries")->capture_default_str();
  app.add_option("--candidates", options.candidates_per_query, "candidates per dev query")->capture_default_str();
  app.add_option("--seed", options.seed, "generator seed")->capture_default_str();
  CLI11_PARSE(app, argc, argv);
  try {
    const auto f = toydata::write_toy_data(dir, options);
    std::cout << f.collection.string() << '\n'
              << f.triples.string() << '\n'
              << f.candidates.string() << '\n'
              << f.qrels.string() << '\n';
  } catch (const duet::Error& e) {
    std::cerr << "make_toy_data: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
