#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace shotflow {

// Base type for every failure the library reports.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : Error {
  explicit IoError(const std::string& path, const std::string& what)
      : Error("io error: " + what + ": " + path), path(path) {}
  std::string path;
};

struct ConfigError : Error {
  using Error::Error;
};

// Input file content is structurally wrong (bad JSON schema, bad values).
struct ParseError : Error {
  using Error::Error;
};

struct MalformedHeader : Error {
  explicit MalformedHeader(const std::string& got)
      : Error("malformed header: \"" + got + "\"") {}
};

struct MalformedRow : Error {
  MalformedRow(std::size_t row_index, const std::string& reason)
      : Error("malformed row " + std::to_string(row_index) + ": " + reason),
        row_index(row_index),
        reason(reason) {}
  std::size_t row_index;
  std::string reason;
};

struct DuplicatePlayerGame : Error {
  DuplicatePlayerGame(std::string player_id, std::string game_id)
      : Error("duplicate (player_id, game_id): (" + player_id + ", " + game_id + ")"),
        player_id(std::move(player_id)),
        game_id(std::move(game_id)) {}
  std::string player_id;
  std::string game_id;
};

struct UndefinedMetric : Error {
  using Error::Error;
};

struct EmptyDataset : Error {
  EmptyDataset() : Error("empty dataset") {}
};

struct InsufficientSamples : Error {
  using Error::Error;
};

struct DegenerateFit : Error {
  using Error::Error;
};

struct DomainError : Error {
  using Error::Error;
};

struct InvalidAllocation : Error {
  using Error::Error;
};

struct InfeasibleLineup : Error {
  explicit InfeasibleLineup(double bound_sum)
      : Error("infeasible lineup: usable shot fractions sum to " +
              std::to_string(bound_sum) + " < 1"),
        bound_sum(bound_sum) {}
  double bound_sum;
};

struct NoEqualUtilitySolution : Error {
  using Error::Error;
};

struct NashUndefined : Error {
  using Error::Error;
};

struct TooFewPlayers : Error {
  using Error::Error;
};

struct MissingProfile : Error {
  explicit MissingProfile(std::string player_id)
      : Error("no shooting profile for player: " + player_id),
        player_id(std::move(player_id)) {}
  std::string player_id;
};

}  // namespace shotflow
