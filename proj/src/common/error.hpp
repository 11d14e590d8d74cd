// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmimo Authors. Licensed under the Apache License, Version 2.0.

#pragma once

#include <stdexcept>
#include <string>

namespace dmimo
{

enum class ErrorKind
{
    Config,
    Overlap,
    Format,
    DigestMismatch,
    Convergence,
    SingularChannel,
    SingularGram,
    MissingEntry,
    EmptyInput,
    DegenerateChannel,
    Io,
};

inline const char *error_kind_name(ErrorKind kind);

class Error : public std::runtime_error
{
  public:
    Error(ErrorKind kind, const std::string &message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

  private:
    ErrorKind kind_;
};

// One exception type per kind so callers and tests can catch precisely.
template <ErrorKind K>
class TypedError : public Error
{
  public:
    explicit TypedError(const std::string &message) : Error(K, message) {}
};

using ConfigError = TypedError<ErrorKind::Config>;
using OverlapError = TypedError<ErrorKind::Overlap>;
using FormatError = TypedError<ErrorKind::Format>;
using DigestMismatch = TypedError<ErrorKind::DigestMismatch>;
using ConvergenceError = TypedError<ErrorKind::Convergence>;
using SingularChannel = TypedError<ErrorKind::SingularChannel>;
using SingularGram = TypedError<ErrorKind::SingularGram>;
using MissingEntry = TypedError<ErrorKind::MissingEntry>;
using EmptyInput = TypedError<ErrorKind::EmptyInput>;
using DegenerateChannel = TypedError<ErrorKind::DegenerateChannel>;
using IoError = TypedError<ErrorKind::Io>;

inline const char *error_kind_name(ErrorKind kind)
{
    switch (kind)
    {
    case ErrorKind::Config: return "ConfigError";
    case ErrorKind::Overlap: return "OverlapError";
    case ErrorKind::Format: return "FormatError";
    case ErrorKind::DigestMismatch: return "DigestMismatch";
    case ErrorKind::Convergence: return "ConvergenceError";
    case ErrorKind::SingularChannel: return "SingularChannel";
    case ErrorKind::SingularGram: return "SingularGram";
    case ErrorKind::MissingEntry: return "MissingEntry";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::DegenerateChannel: return "DegenerateChannel";
    case ErrorKind::Io: return "IoError";
    }
    return "Error";
}

} // namespace dmimo

namespace dmimo
{

// Re-raises an error of the given kind with a new message.
[[noreturn]] inline void throw_error(ErrorKind kind, const std::string &message)
{
    switch (kind)
    {
    case ErrorKind::Config: throw ConfigError(message);
    case ErrorKind::Overlap: throw OverlapError(message);
    case ErrorKind::Format: throw FormatError(message);
    case ErrorKind::DigestMismatch: throw DigestMismatch(message);
    case ErrorKind::Convergence: throw ConvergenceError(message);
    case ErrorKind::SingularChannel: throw SingularChannel(message);
    case ErrorKind::SingularGram: throw SingularGram(message);
    case ErrorKind::MissingEntry: throw MissingEntry(message);
    case ErrorKind::EmptyInput: throw EmptyInput(message);
    case ErrorKind::DegenerateChannel: throw DegenerateChannel(message);
    case ErrorKind::Io: throw IoError(message);
    }
    throw Error(kind, message);
}

} // namespace dmimo
