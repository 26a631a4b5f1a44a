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

#include "svcinv/classify.hpp"

#include <algorithm>
#include <mutex>
#include <set>

#include "codec.hpp"
#include "sqlite_db.hpp"
#include "svcinv/error.hpp"
#include "svcinv/ingest.hpp"
#include "svcinv/text.hpp"

namespace svcinv {

std::string_view to_string(Verdict v) noexcept {
  return v == Verdict::Hostile ? "Hostile" : "Known";
}

std::string_view to_string(Classification c) noexcept {
  switch (c) {
    case Classification::Hostile: return "Hostile";
    case Classification::Unknown: return "Unknown";
    case Classification::Known: return "Known";
  }
  return "Unknown";
}

std::string_view to_string(Color c) noexcept {
  switch (c) {
    case Color::Red: return "red";
    case Color::Yellow: return "yellow";
    case Color::Green: return "green";
  }
  return "yellow";
}

Verdict parse_verdict(std::string_view raw) {
  const auto t = text::trim(raw);
  if (text::iequals(t, "hostile")) return Verdict::Hostile;
  if (text::iequals(t, "known")) return Verdict::Known;
  throw Error(ErrorCode::BadArgument, "verdict must be Hostile or Known, got '" +
                                          std::string(raw) + "'");
}

Classification classify(std::string_view service_key, const KbState& kb) {
  const auto it = kb.find(text::canonical_key(service_key));
  if (it == kb.end()) {
    return Classification::Unknown;
  }
  return it->second.verdict == Verdict::Hostile ? Classification::Hostile
                                                : Classification::Known;
}

std::vector<KbEntry> seed_entries() {
  struct Seed {
    const char* key;
    const char* description;
    StartupType startup;
    const char* note;
  };
  static constexpr Seed kSeeds[] = {
      {"DNS Client", "Resolves and caches DNS names", StartupType::Automatic, ""},
      {"DHCP Client", "Obtains and renews IP configuration", StartupType::Automatic, ""},
      {"Error Reporting", "Collects application fault reports", StartupType::Automatic, ""},
      {"Event Log", "Records system, security and application events", StartupType::Automatic,
       ""},
      {"Help", "Help and support content", StartupType::Automatic, ""},
      {"Print Spooler", "Queues and dispatches print jobs", StartupType::Automatic, ""},
      {"Protected Storage", "Stores private keys and credentials", StartupType::Automatic, ""},
      {"ClipBook", "Shares clipboard pages with remote machines", StartupType::Disabled,
       "relies on network DDE shares"},
      {"Alerter", "Broadcasts administrative alerts", StartupType::Disabled,
       "messages reach any listener on the LAN"},
      {"Telnet", "Remote command shell over cleartext", StartupType::Disabled,
       "sends credentials in plaintext"},
  };
  std::vector<KbEntry> out;
  for (const auto& s : kSeeds) {
    KbEntry e;
    e.service_key = text::canonical_key(s.key);
    e.verdict = Verdict::Known;
    e.description = s.description;
    e.recommended_startup = s.startup;
    e.note = s.note;
    out.push_back(std::move(e));
  }
  return out;
}

KbState seed_kb() {
  KbState kb;
  for (auto& e : seed_entries()) {
    auto key = e.service_key;
    kb.emplace(std::move(key), std::move(e));
  }
  return kb;
}

std::vector<PolicyViolation> policy_violations(const HostSnapshot& snapshot, const KbState& kb) {
  std::vector<PolicyViolation> out;
  for (const auto& r : snapshot.records) {
    const auto it = kb.find(r.service_key);
    if (it == kb.end() || !it->second.recommended_startup) continue;
    if (*it->second.recommended_startup != r.startup) {
      out.push_back({r.service_key, r.startup, *it->second.recommended_startup});
    }
  }
  std::sort(out.begin(), out.end(), [](const PolicyViolation& a, const PolicyViolation& b) {
    return a.service_key < b.service_key;
  });
  return out;
}

namespace {

constexpr std::string_view kKbColumns[] = {"Service",  "Verdict", "Description", "Application",
                                           "Path", "RecommendedStartup", "Note"};

void check_field(std::string_view field, char delimiter) {
  if (field.find(delimiter) != std::string_view::npos ||
      field.find_first_of("\r\n") != std::string_view::npos) {
    throw Error(ErrorCode::DelimiterInField,
                "KB field '" + std::string(field) + "' contains the delimiter or a line break");
  }
}

void validate_entry(const KbEntry& e) {
  if (e.service_key.empty()) {
    throw Error(ErrorCode::InvariantViolation, "KB entry needs a service key");
  }
  for (const std::string* f : {&e.service_key, &e.description, &e.application,
                               &e.executable_path, &e.note}) {
    if (f->find_first_of("\r\n") != std::string::npos) {
      throw Error(ErrorCode::InvariantViolation, "KB fields must be single-line");
    }
  }
}

}  // namespace

std::vector<KbEntry> parse_kb_file(std::string_view text, char delimiter) {
  if (!text::is_valid_utf8(text)) {
    throw Error(ErrorCode::EncodingError, "KB file is not valid UTF-8");
  }
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  const auto all = text::lines(text);
  if (all.empty()) {
    throw Error(ErrorCode::MalformedHeader, "missing KB header row", 1);
  }
  const auto header = text::split(all[0], delimiter);
  bool ok = header.size() == std::size(kKbColumns);
  for (std::size_t i = 0; ok && i < header.size(); ++i) {
    ok = text::iequals(text::trim(header[i]), kKbColumns[i]);
  }
  if (!ok) {
    throw Error(ErrorCode::MalformedHeader,
                "expected Service, Verdict, Description, Application, Path, "
                "RecommendedStartup, Note",
                1);
  }

  std::vector<KbEntry> out;
  std::set<std::string> seen;
  for (std::size_t i = 1; i < all.size(); ++i) {
    if (all[i].empty()) continue;
    const auto line_no = i + 1;
    const auto f = text::split(all[i], delimiter);
    if (f.size() != std::size(kKbColumns)) {
      throw Error(ErrorCode::BadFieldCount,
                  "expected 7 fields, found " + std::to_string(f.size()), line_no);
    }
    try {
      KbEntry e;
      e.service_key = text::canonical_key(f[0]);
      if (e.service_key.empty()) {
        throw Error(ErrorCode::EmptyKey, "service must be non-empty");
      }
      e.verdict = parse_verdict(f[1]);
      e.description = f[2];
      e.application = f[3];
      e.executable_path = f[4];
      if (!text::trim(f[5]).empty()) {
        e.recommended_startup = ingest::normalize_startup(f[5]);
      }
      e.note = f[6];
      if (!seen.insert(e.service_key).second) {
        throw Error(ErrorCode::DuplicateService, e.service_key);
      }
      out.push_back(std::move(e));
    } catch (const Error& err) {
      if (err.line_no()) throw;
      throw Error(err.code(), err.what(), line_no);
    }
  }
  return out;
}

std::string write_kb_file(const KbState& kb, char delimiter) {
  std::string out;
  for (std::size_t i = 0; i < std::size(kKbColumns); ++i) {
    if (i != 0) out += delimiter;
    out += kKbColumns[i];
  }
  out += '\n';
  for (const auto& [key, e] : kb) {
    const std::string_view fields[] = {
        e.service_key,
        to_string(e.verdict),
        e.description,
        e.application,
        e.executable_path,
        e.recommended_startup ? to_string(*e.recommended_startup) : std::string_view{},
        e.note};
    for (std::size_t i = 0; i < std::size(fields); ++i) {
      if (i != 0) out += delimiter;
      check_field(fields[i], delimiter);
      out += fields[i];
    }
    out += '\n';
  }
  return out;
}

struct KnowledgeBase::Impl {
  Clock clock;
  detail::SqliteDb db;
  std::mutex write_mutex;
  mutable std::mutex state_mutex;  // guards the `state` pointer swap only
  std::shared_ptr<const KbState> state = std::make_shared<const KbState>();

  Impl(const std::filesystem::path& file, Clock c) : clock(std::move(c)), db(file) {
    if (!clock) clock = now_utc;
    db.exec(
        "CREATE TABLE IF NOT EXISTS kb ("
        " service_key TEXT PRIMARY KEY,"
        " body TEXT NOT NULL)");
    auto stmt = db.prepare("SELECT body FROM kb");
    KbState loaded;
    while (stmt.step()) {
      try {
        auto e = codec::decode_kb_entry(codec::Json::parse(stmt.column_text(0)));
        auto key = e.service_key;
        loaded.emplace(std::move(key), std::move(e));
      } catch (const nlohmann::json::exception& ex) {
        throw Error(ErrorCode::StorageFailure, std::string("corrupt KB row: ") + ex.what());
      }
    }
    state = std::make_shared<const KbState>(std::move(loaded));
  }

  std::shared_ptr<const KbState> current() const {
    std::lock_guard lock(state_mutex);
    return state;
  }

  void publish(KbState next) {
    auto ptr = std::make_shared<const KbState>(std::move(next));
    std::lock_guard lock(state_mutex);
    state = std::move(ptr);
  }

  void store(const KbEntry& e) {
    db.prepare("INSERT INTO kb(service_key, body) VALUES (?1, ?2)"
               " ON CONFLICT(service_key) DO UPDATE SET body = excluded.body")
        .bind(1, e.service_key)
        .bind(2, codec::encode(e).dump())
        .run();
  }
};

KnowledgeBase::KnowledgeBase(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
KnowledgeBase::KnowledgeBase(KnowledgeBase&&) noexcept = default;
KnowledgeBase& KnowledgeBase::operator=(KnowledgeBase&&) noexcept = default;
KnowledgeBase::~KnowledgeBase() = default;

KnowledgeBase KnowledgeBase::open(const std::filesystem::path& db_file, Clock clock) {
  if (db_file.empty()) {
    throw Error(ErrorCode::StoreOpenFailure, "empty KB path");
  }
  return KnowledgeBase(std::make_unique<Impl>(db_file, std::move(clock)));
}

KnowledgeBase KnowledgeBase::in_memory(Clock clock) {
  return KnowledgeBase(std::make_unique<Impl>(std::filesystem::path{}, std::move(clock)));
}

std::optional<KbEntry> KnowledgeBase::upsert(KbEntry entry) {
  entry.service_key = text::canonical_key(entry.service_key);
  validate_entry(entry);
  entry.updated_at = impl_->clock();

  std::lock_guard lock(impl_->write_mutex);
  KbState next = *impl_->current();
  std::optional<KbEntry> previous;
  if (auto it = next.find(entry.service_key); it != next.end()) {
    previous = it->second;
    it->second = entry;
  } else {
    next.emplace(entry.service_key, entry);
  }
  impl_->store(entry);
  impl_->publish(std::move(next));
  return previous;
}

std::optional<KbEntry> KnowledgeBase::remove(std::string_view service_key) {
  const auto key = text::canonical_key(service_key);
  std::lock_guard lock(impl_->write_mutex);
  KbState next = *impl_->current();
  const auto it = next.find(key);
  if (it == next.end()) {
    return std::nullopt;
  }
  KbEntry removed = it->second;
  next.erase(it);
  impl_->db.prepare("DELETE FROM kb WHERE service_key = ?1").bind(1, key).run();
  impl_->publish(std::move(next));
  return removed;
}

std::size_t KnowledgeBase::seed() {
  std::size_t added = 0;
  for (auto& e : seed_entries()) {
    if (!impl_->current()->contains(e.service_key)) {
      upsert(std::move(e));
      ++added;
    }
  }
  return added;
}

std::shared_ptr<const KbState> KnowledgeBase::state() const { return impl_->current(); }

std::size_t KnowledgeBase::size() const { return impl_->current()->size(); }

Classification KnowledgeBase::classify(std::string_view service_key) const {
  return svcinv::classify(service_key, *impl_->current());
}

}  // namespace svcinv
