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

#include "svcinv/timestamp.hpp"

#include <charconv>
#include <cstdio>

#include "svcinv/error.hpp"
#include "svcinv/text.hpp"

namespace svcinv {

namespace {

bool read_int(std::string_view s, std::size_t pos, std::size_t width, int& out) {
  if (pos + width > s.size()) {
    return false;
  }
  const char* first = s.data() + pos;
  const char* last = first + width;
  for (const char* p = first; p != last; ++p) {
    if (*p < '0' || *p > '9') {
      return false;
    }
  }
  return std::from_chars(first, last, out).ec == std::errc{};
}

[[noreturn]] void bad(std::string_view text) {
  throw Error(ErrorCode::BadTimestamp, "cannot parse '" + std::string(text) + "'");
}

}  // namespace

Timestamp parse_timestamp(std::string_view text) {
  using namespace std::chrono;
  const auto s = text::trim(text);
  if (s.empty()) {
    bad(text);
  }

  const bool all_digits = s.find_first_not_of("0123456789") == std::string_view::npos;
  if (all_digits || (s[0] == '-' && s.size() > 1 &&
                     s.substr(1).find_first_not_of("0123456789") == std::string_view::npos)) {
    long long secs = 0;
    if (std::from_chars(s.data(), s.data() + s.size(), secs).ec != std::errc{}) {
      bad(text);
    }
    return Timestamp{seconds{secs}};
  }

  int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
  if (!read_int(s, 0, 4, y) || s.size() < 10 || s[4] != '-' || !read_int(s, 5, 2, mo) ||
      s[7] != '-' || !read_int(s, 8, 2, d)) {
    bad(text);
  }
  std::size_t pos = 10;
  if (pos < s.size()) {
    if ((s[pos] != 'T' && s[pos] != ' ') || !read_int(s, pos + 1, 2, h) ||
        s.size() < pos + 9 || s[pos + 3] != ':' || !read_int(s, pos + 4, 2, mi) ||
        s[pos + 6] != ':' || !read_int(s, pos + 7, 2, sec)) {
      bad(text);
    }
    pos += 9;
    if (pos < s.size() && s[pos] == 'Z') {
      ++pos;
    }
    if (pos != s.size()) {
      bad(text);
    }
  }

  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || sec > 60) {
    bad(text);
  }
  return Timestamp{sys_days{ymd}.time_since_epoch() + hours{h} + minutes{mi} +
                   seconds{sec}};
}

std::string format_timestamp(Timestamp t) {
  using namespace std::chrono;
  const auto day_point = floor<days>(t);
  const year_month_day ymd{day_point};
  const hh_mm_ss hms{t - day_point};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

Timestamp now_utc() {
  return std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
}

}  // namespace svcinv
