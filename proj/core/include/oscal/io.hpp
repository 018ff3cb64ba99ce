#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "oscal/error.hpp"
#include "oscal/extraction.hpp"
#include "oscal/seqlab.hpp"
#include "oscal/sequence.hpp"

namespace oscal {

// Malformed document; what() reads "line N: message".
class DocumentError : public InputError {
 public:
  DocumentError(std::size_t line, const std::string& message)
      : InputError("line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct BasisDocument {
  PolySpace space;
  std::vector<Vec> vectors;
  friend bool operator==(const BasisDocument& a, const BasisDocument& b) {
    return a.space.dim == b.space.dim && a.space.norm == b.space.norm && a.vectors == b.vectors;
  }
};

using WitnessDocument = std::variant<WitnessBundle, DifferenceWitness>;

using Document = std::variant<SpacePtr, QFunction, CIFunction, FunctionSeq, BasisDocument, WitnessDocument>;

// "space", "qfunction", "cifunction", "sequence", "basis" or "witness"
std::string kind_name(const Document& doc);

// Throws DocumentError with the line of the offending value.
Document parse_document(std::string_view text);

// Canonical text: two-space indentation, fixed key order, node ids ascending,
// trailing newline.
std::string serialize(const Document& doc);

// Typed entry points; a document of another kind is a DocumentError.
SpacePtr parse_space(std::string_view text);
QFunction parse_qfunction(std::string_view text);
CIFunction parse_cifunction(std::string_view text);
FunctionSeq parse_sequence(std::string_view text);
BasisDocument parse_basis(std::string_view text);
WitnessDocument parse_witness(std::string_view text);

// Reads a file, or standard input for "-". Throws InputError when unreadable.
std::string read_source(const std::string& path);

}  // namespace oscal
