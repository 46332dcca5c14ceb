// Copyright 2026 The trafficgraph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TRAFFICGRAPH__ERRORS_HPP_
#define TRAFFICGRAPH__ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace trafficgraph
{

/// Base class of every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Malformed scenario document. Carries the offending line when known.
class ParseError : public Error
{
public:
  explicit ParseError(const std::string & message, long line = -1)
  : Error(line >= 0 ? message + " (line " + std::to_string(line) + ")" : message), line_(line)
  {
  }
  long line() const noexcept { return line_; }

private:
  long line_;
};

class ValidationError : public Error
{
public:
  using Error::Error;
};

class GeometryError : public Error
{
public:
  using Error::Error;
};

class ArgumentError : public Error
{
public:
  using Error::Error;
};

class SchemaError : public Error
{
public:
  using Error::Error;
};

class MergeError : public Error
{
public:
  using Error::Error;
};

class ExtractionError : public Error
{
public:
  using Error::Error;
};

class UsageError : public Error
{
public:
  using Error::Error;
};

class FormatError : public Error
{
public:
  using Error::Error;
};

class DatasetError : public Error
{
public:
  using Error::Error;
};

class ConfigError : public Error
{
public:
  using Error::Error;
};

/// Failure inside a named transform or postprocessor; the message starts with its name.
class PipelineError : public Error
{
public:
  using Error::Error;
};

}  // namespace trafficgraph

#endif  // TRAFFICGRAPH__ERRORS_HPP_
