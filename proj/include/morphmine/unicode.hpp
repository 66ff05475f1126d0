#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <unicode/normalizer2.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "morphmine/error.hpp"

namespace morphmine {

// Words are handled as code point sequences so that every index is a
// character index.
using text = std::u32string;

inline bool decode_utf8(std::string_view in, text& out) {
  out.clear();
  out.reserve(in.size());
  const auto* s = reinterpret_cast<const uint8_t*>(in.data());
  const auto len = static_cast<int32_t>(in.size());
  int32_t i = 0;
  while (i < len) {
    UChar32 c;
    U8_NEXT(s, i, len, c);
    if (c < 0) return false;
    out.push_back(static_cast<char32_t>(c));
  }
  return true;
}

inline text from_utf8(std::string_view in) {
  text out;
  if (!decode_utf8(in, out)) throw parse_error("invalid UTF-8");
  return out;
}

inline void append_utf8(std::string& out, char32_t c) {
  uint8_t buf[U8_MAX_LENGTH];
  int32_t n = 0;
  U8_APPEND_UNSAFE(buf, n, static_cast<UChar32>(c));
  out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
}

inline std::string to_utf8(std::u32string_view in) {
  std::string out;
  out.reserve(in.size());
  for (char32_t c : in) append_utf8(out, c);
  return out;
}

inline text reversed(std::u32string_view s) { return text(s.rbegin(), s.rend()); }

struct NormalizationPolicy {
  bool case_fold = true;
  bool compose = false;  // canonical composition (NFC)
};

// Full Unicode case folding followed by NFC, both via ICU. Folding can
// leave a string that NFC changes and vice versa, so the pair is applied
// until it stops changing; in practice that is one or two rounds.
inline text normalize(std::u32string_view word, const NormalizationPolicy& policy) {
  if (!policy.case_fold && !policy.compose) return text(word);

  auto u = icu::UnicodeString::fromUTF32(reinterpret_cast<const UChar32*>(word.data()),
                                         static_cast<int32_t>(word.size()));
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = policy.compose ? icu::Normalizer2::getNFCInstance(status) : nullptr;
  if (U_FAILURE(status)) throw std::runtime_error("ICU NFC normalizer unavailable");

  for (int round = 0; round < 4; ++round) {
    icu::UnicodeString next = u;
    if (policy.case_fold) next.foldCase();
    if (nfc) {
      next = nfc->normalize(next, status);
      if (U_FAILURE(status)) throw std::runtime_error("ICU normalization failed");
    }
    if (next == u) break;
    u = std::move(next);
  }

  text out(static_cast<std::size_t>(u.countChar32()), U'\0');
  UErrorCode s2 = U_ZERO_ERROR;
  u.toUTF32(reinterpret_cast<UChar32*>(out.data()), static_cast<int32_t>(out.size()), s2);
  return out;
}

}  // namespace morphmine
