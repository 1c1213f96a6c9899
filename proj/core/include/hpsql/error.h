#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hpsql {

/// Base of every error raised by the toolkit.
///
/// Errors fall into two families that the CLI maps to distinct exit codes:
/// validation problems with the inputs (exit 1) and infrastructure failures
/// such as unreachable endpoints or unreadable database files (exit 2).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class InfrastructureError : public Error {
 public:
  using Error::Error;
};

/// Malformed JSON / JSON-lines document. `position` is the record (or line)
/// index where parsing failed.
class DocumentParseError : public ValidationError {
 public:
  DocumentParseError(std::string document, std::size_t position, const std::string& detail);

  const std::string& document() const noexcept { return document_; }
  std::size_t position() const noexcept { return position_; }

 private:
  std::string document_;
  std::size_t position_;
};

/// Parse failures of SQL text.
class SqlError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class UnsupportedSyntax : public SqlError {
 public:
  UnsupportedSyntax(std::string token, std::size_t offset, const std::string& detail);

  const std::string& token() const noexcept { return token_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::string token_;
  std::size_t offset_;
};

class ResolutionError : public SqlError {
 public:
  ResolutionError(std::string name, std::vector<std::string> candidates);

  const std::string& name() const noexcept { return name_; }
  const std::vector<std::string>& candidates() const noexcept { return candidates_; }

 private:
  std::string name_;
  std::vector<std::string> candidates_;
};

class ServiceUnavailable : public InfrastructureError {
 public:
  using InfrastructureError::InfrastructureError;
};

class ScorerUnavailable : public ServiceUnavailable {
 public:
  using ServiceUnavailable::ServiceUnavailable;
};

class PredictorUnavailable : public ServiceUnavailable {
 public:
  using ServiceUnavailable::ServiceUnavailable;
};

class GeneratorUnavailable : public ServiceUnavailable {
 public:
  using ServiceUnavailable::ServiceUnavailable;
};

/// A remote endpoint answered, but the reply violates the wire protocol.
class ProtocolError : public InfrastructureError {
 public:
  using InfrastructureError::InfrastructureError;
};

class EmptyGeneration : public Error {
 public:
  using Error::Error;
};

class MissingPrediction : public ValidationError {
 public:
  explicit MissingPrediction(std::size_t index);

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// An upstream stage artifact is absent. Names the subcommand that produces it.
class MissingArtifact : public ValidationError {
 public:
  MissingArtifact(std::string path, std::string producer);

  const std::string& producer() const noexcept { return producer_; }

 private:
  std::string path_;
  std::string producer_;
};

/// Wraps an error raised while processing one stage/example of a pipeline run.
class StageError : public Error {
 public:
  StageError(std::string stage, std::ptrdiff_t example_index, const Error& cause, bool infrastructure);

  const std::string& stage() const noexcept { return stage_; }
  std::ptrdiff_t example_index() const noexcept { return example_index_; }
  bool infrastructure() const noexcept { return infrastructure_; }

 private:
  std::string stage_;
  std::ptrdiff_t example_index_;
  bool infrastructure_;
};

}  // namespace hpsql
