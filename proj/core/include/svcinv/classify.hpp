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

#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "svcinv/timestamp.hpp"
#include "svcinv/types.hpp"

namespace svcinv {

/// Stored verdict. "Unknown" is never stored: it is the absence of an entry.
enum class Verdict { Hostile, Known };

enum class Classification { Hostile, Unknown, Known };

enum class Color { Red, Yellow, Green };

std::string_view to_string(Verdict v) noexcept;
std::string_view to_string(Classification c) noexcept;
std::string_view to_string(Color c) noexcept;

constexpr Color color_of(Classification c) noexcept {
  switch (c) {
    case Classification::Hostile: return Color::Red;
    case Classification::Unknown: return Color::Yellow;
    case Classification::Known: return Color::Green;
  }
  return Color::Yellow;
}

/// Case-insensitive "Hostile" / "Known". Throws BadArgument.
Verdict parse_verdict(std::string_view raw);

struct KbEntry {
  std::string service_key;
  Verdict verdict = Verdict::Known;
  std::string description;
  std::string application;
  std::string executable_path;
  std::optional<StartupType> recommended_startup;
  Timestamp updated_at{};
  std::string note;

  friend bool operator==(const KbEntry&, const KbEntry&) = default;
};

/// One immutable KB version keyed by canonical service key.
using KbState = std::map<std::string, KbEntry, std::less<>>;

/// Case-folds `service_key` and looks it up.
Classification classify(std::string_view service_key, const KbState& kb);

/// The default-service guidance: seven usually-automatic services and three
/// usually-disabled ones, all Known.
std::vector<KbEntry> seed_entries();

/// A KB containing exactly the seed entries (updated_at = epoch).
KbState seed_kb();

struct PolicyViolation {
  std::string service_key;
  StartupType actual;
  StartupType recommended;
  friend bool operator==(const PolicyViolation&, const PolicyViolation&) = default;
};

/// Records whose KB entry recommends a different startup type, by key.
std::vector<PolicyViolation> policy_violations(const HostSnapshot& snapshot, const KbState& kb);

/// Columns: Service, Verdict, Description, Application, Path,
/// RecommendedStartup, Note. Same delimiter rules as the export format.
std::vector<KbEntry> parse_kb_file(std::string_view text, char delimiter = '\t');
std::string write_kb_file(const KbState& kb, char delimiter = '\t');

/// Mutable, versioned knowledge base. Mutations are serialized and publish
/// a new immutable KbState; readers hold whichever version they grabbed.
class KnowledgeBase {
 public:
  using Clock = std::function<Timestamp()>;

  static KnowledgeBase open(const std::filesystem::path& db_file, Clock clock = now_utc);
  static KnowledgeBase in_memory(Clock clock = now_utc);

  KnowledgeBase(KnowledgeBase&&) noexcept;
  KnowledgeBase& operator=(KnowledgeBase&&) noexcept;
  ~KnowledgeBase();

  /// Canonicalizes the key, stamps updated_at, and returns the replaced entry.
  std::optional<KbEntry> upsert(KbEntry entry);
  std::optional<KbEntry> remove(std::string_view service_key);

  /// Adds seed entries that are missing; existing entries are left alone.
  std::size_t seed();

  std::shared_ptr<const KbState> state() const;
  std::size_t size() const;
  Classification classify(std::string_view service_key) const;

 private:
  struct Impl;
  explicit KnowledgeBase(std::unique_ptr<Impl> impl);
  std::unique_ptr<Impl> impl_;
};

}  // namespace svcinv
