/*
 * Copyright (c) 2026 The svcinv Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include "expect_error.hpp"
#include "svcinv/text.hpp"
#include "svcinv/timestamp.hpp"

namespace svcinv {
namespace {

TEST(Text, FoldCaseAscii) {
  EXPECT_EQ(text::fold_case("SpOoLeR"), "spooler");
  EXPECT_EQ(text::canonical_key("  DHCP Client\t"), "dhcp client");
}

TEST(Text, FoldCaseBeyondAscii) {
  // U+00C9 -> U+00E9, U+0130 keeps its simple folding, U+03A3 -> U+03C3.
  EXPECT_EQ(text::fold_case("\xC3\x89t\xC3\xA9"), "\xC3\xA9t\xC3\xA9");
  EXPECT_EQ(text::fold_case("\xCE\xA3"), "\xCF\x83");
  EXPECT_EQ(text::fold_case("\xEF\xBC\xA1"), "\xEF\xBD\x81");  // fullwidth A
}

TEST(Text, RejectsIllFormedUtf8) {
  EXPECT_FALSE(text::is_valid_utf8("\xC3"));
  EXPECT_FALSE(text::is_valid_utf8("\xED\xA0\x80"));  // surrogate
  EXPECT_TRUE(text::is_valid_utf8("plain \xE2\x82\xAC"));
  EXPECT_SVC_ERROR(text::fold_case("bad\xFF"), ErrorCode::EncodingError);
}

TEST(Text, LinesHandleCrlfAndTrailingNewline) {
  const auto ls = text::lines("a\r\nb\n\nc\n");
  ASSERT_EQ(ls.size(), 4u);
  EXPECT_EQ(ls[0], "a");
  EXPECT_EQ(ls[1], "b");
  EXPECT_EQ(ls[2], "");
  EXPECT_EQ(ls[3], "c");
  EXPECT_TRUE(text::lines("").empty());
}

TEST(Text, SplitKeepsEmptyFields) {
  const auto parts = text::split("a\t\tb\t", '\t');
  ASSERT_EQ(parts.size(), 4u);
  EXPECT_EQ(parts[1], "");
  EXPECT_EQ(parts[3], "");
}

TEST(Timestamp, ParsesCommonForms) {
  const auto t = Timestamp{std::chrono::seconds{1767600000}};
  EXPECT_EQ(parse_timestamp("2026-01-05T08:00:00Z"), t);
  EXPECT_EQ(parse_timestamp("2026-01-05 08:00:00"), t);
  EXPECT_EQ(parse_timestamp("1767600000"), t);
  EXPECT_EQ(parse_timestamp("2026-01-05"), t - std::chrono::hours{8});
  EXPECT_EQ(format_timestamp(t), "2026-01-05T08:00:00Z");
}

TEST(Timestamp, RejectsGarbage) {
  EXPECT_SVC_ERROR(parse_timestamp("yesterday"), ErrorCode::BadTimestamp);
  EXPECT_SVC_ERROR(parse_timestamp("2026-13-01T00:00:00Z"), ErrorCode::BadTimestamp);
  EXPECT_SVC_ERROR(parse_timestamp(""), ErrorCode::BadTimestamp);
}

}  // namespace
}  // namespace svcinv
