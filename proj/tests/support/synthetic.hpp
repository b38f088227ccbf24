#pragma once

// Synthetic sponsorship records with party structure, written as the two CSV
// files the ingest command reads.

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include <unistd.h>

namespace synth {

struct Files {
  std::filesystem::path sponsorships;
  std::filesystem::path actors;
};

inline Files write_sponsorships(const std::filesystem::path& dir, int n_actors, int n_bills, std::uint64_t seed) {
  std::filesystem::create_directories(dir);
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5), same(0.35), other(0.05);
  Files f{dir / "sponsorships.csv", dir / "actors.csv"};
  std::ofstream actors(f.actors);
  actors << "label,party,state\n";
  std::vector<char> party(static_cast<std::size_t>(n_actors));
  for (int i = 0; i < n_actors; ++i) {
    party[static_cast<std::size_t>(i)] = coin(rng) ? 'R' : 'D';
    actors << "S" << i << ',' << party[static_cast<std::size_t>(i)] << ",ST" << i % 7 << '\n';
  }
  std::ofstream sp(f.sponsorships);
  sp << "senator_id,bill_id\n";
  for (int b = 0; b < n_bills; ++b) {
    const char side = coin(rng) ? 'R' : 'D';
    for (int i = 0; i < n_actors; ++i)
      if (party[static_cast<std::size_t>(i)] == side ? same(rng) : other(rng)) sp << "S" << i << ",B" << b << '\n';
  }
  return f;
}

inline std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("mlergm_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace synth
