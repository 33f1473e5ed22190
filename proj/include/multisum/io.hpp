#ifndef MULTISUM_IO_HPP
#define MULTISUM_IO_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "multisum/forms.hpp"
#include "multisum/norms.hpp"
#include "multisum/summing.hpp"
#include "multisum/verify.hpp"

namespace multisum {

using Json = nlohmann::ordered_json;

// Unreadable files, malformed JSON, or documents that do not match a schema.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// "inf", "4/3", "1.5" or a JSON number.
Exponent exponent_from_json(const Json& j);
// A number, or "inf".
Json exponent_to_json(Exponent e);

// Numbers, or [re, im] pairs.
std::vector<Scalar> scalars_from_json(const Json& j);
Json scalars_to_json(std::span<const Scalar> v, Field field);

// {"field", "dims", "domain_exponents", "coeffs"}; coeffs flattened row-major.
FormTensor form_from_json(const Json& j);
Json form_to_json(const FormTensor& a);

// {"field", "dim", "exponent", "vectors"}
VectorSeq seq_from_json(const Json& j);
Json seq_to_json(const VectorSeq& s);

// {"columns": [VectorSeq, ...]}
TestFamily family_from_json(const Json& j);
Json family_to_json(const TestFamily& f);

// {"field", "entries": [[row], ...]}
Matrix matrix_from_json(const Json& j);
Json matrix_to_json(const Matrix& m);

Json report_to_json(const VerificationReport& r);
// Header plus one row per report: check, field, p, q, lhs, rhs, ratio, bound,
// exact_norm, status.
std::string reports_to_csv(const std::vector<VerificationReport>& reports);
Json certificate_to_json(const RatioCertificate& c);

}  // namespace multisum

#endif  // MULTISUM_IO_HPP
