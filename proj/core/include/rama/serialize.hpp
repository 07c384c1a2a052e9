#pragma once

#include <string>

#include "rama/certificate.hpp"

namespace rama {

inline constexpr int kCertificateSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

/// Canonical JSON text of the certificate body alone (no provenance):
/// field order fixed, all tower elements in their normalized text form,
/// big integers and rationals as decimal strings, 2-space indentation.
/// Byte-stable: serializing the same certificate always yields the same
/// bytes, and parse(text) then serialize gives back text.
std::string certificate_to_text(const SeriesCertificate& cert);
SeriesCertificate certificate_from_text(const std::string& text);

/// 64-bit FNV-1a of a byte string, rendered as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& bytes);

/// Writes {schema_version, certificate, provenance} to `path`. Provenance
/// holds the FNV-1a hash of the certificate's stored equation source, the
/// tool version, and an ISO-8601 UTC timestamp. The certificate block is
/// byte-deterministic; the timestamp is the only field that can differ
/// between two saves of the same certificate.
void save_certificate(const SeriesCertificate& cert, const std::string& path);

/// Reads a certificate file; throws Error on malformed input or an
/// unsupported schema version. If `provenance_json_out` is non-null it
/// receives the provenance block as canonical JSON text.
SeriesCertificate load_certificate(const std::string& path,
                                   std::string* provenance_json_out = nullptr);

}  // namespace rama
