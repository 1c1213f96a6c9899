#include "hpsql/error.h"

namespace hpsql {

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out += ", ";
    out += item;
  }
  return out;
}

}  // namespace

DocumentParseError::DocumentParseError(std::string document, std::size_t position,
                                       const std::string& detail)
    : ValidationError(document + ": record " + std::to_string(position) + ": " + detail),
      document_(std::move(document)),
      position_(position) {}

UnsupportedSyntax::UnsupportedSyntax(std::string token, std::size_t offset,
                                     const std::string& detail)
    : SqlError("unsupported syntax at offset " + std::to_string(offset) + " near '" + token +
               "': " + detail),
      token_(std::move(token)),
      offset_(offset) {}

ResolutionError::ResolutionError(std::string name, std::vector<std::string> candidates)
    : SqlError("cannot resolve '" + name + "'" +
               (candidates.empty() ? std::string() : " (candidates: " + join(candidates) + ")")),
      name_(std::move(name)),
      candidates_(std::move(candidates)) {}

MissingPrediction::MissingPrediction(std::size_t index)
    : ValidationError("no prediction recorded for example " + std::to_string(index)),
      index_(index) {}

MissingArtifact::MissingArtifact(std::string path, std::string producer)
    : ValidationError("missing artifact " + path + "; run `hpsql " + producer + "` first"),
      path_(std::move(path)),
      producer_(std::move(producer)) {}

StageError::StageError(std::string stage, std::ptrdiff_t example_index, const Error& cause,
                       bool infrastructure)
    : Error("stage '" + stage + "'" +
            (example_index >= 0 ? ", example " + std::to_string(example_index) : std::string()) +
            ": " + cause.what()),
      stage_(std::move(stage)),
      example_index_(example_index),
      infrastructure_(infrastructure) {}

}  // namespace hpsql
