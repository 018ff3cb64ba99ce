#pragma once

#include <stdexcept>
#include <string>

namespace oscal {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: bad document, unknown node, invalid point, space mismatch.
class InputError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A configured resource limit (node cap, pivot cap) was hit.
class ResourceCapError : public Error {
 public:
  using Error::Error;
};

// A bounded witness search ran out of candidates.
class SearchExhausted : public Error {
 public:
  using Error::Error;
};

// A modulus needed as an exact rational is irrational.
class InexactModulus : public Error {
 public:
  using Error::Error;
};

// A post-condition that must hold by construction failed.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace oscal
