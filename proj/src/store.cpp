#include "rfidac/store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <functional>
#include <sstream>

#include "rfidac/errors.hpp"
#include "rfidac/json_codec.hpp"

namespace rfidac {
namespace fs = std::filesystem;

namespace {

constexpr const char* kStaffFile = "staff.jsonl";
constexpr const char* kTagsFile = "tags.jsonl";
constexpr const char* kReadersFile = "readers.jsonl";
constexpr const char* kAreasFile = "areas.jsonl";
constexpr const char* kEventsFile = "events.jsonl";

[[noreturn]] void io_failure(Errc code, const std::string& what, const fs::path& path) {
  throw Error(code, what + " " + path.string() + ": " + std::strerror(errno));
}

void write_all(int fd, std::string_view data, const fs::path& path) {
  while (!data.empty()) {
    const ssize_t n = ::write(fd, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      io_failure(Errc::StoreCorrupt, "write failed on", path);
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

void sync_directory(const fs::path& dir) {
  const int fd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY);
  if (fd >= 0) {
    ::fsync(fd);
    ::close(fd);
  }
}

// Replaces `path` with `lines` atomically: temp file, fsync, rename.
void rewrite_file(const fs::path& path, const std::vector<std::string>& lines) {
  const fs::path tmp = path.string() + ".tmp";
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) io_failure(Errc::StoreCorrupt, "cannot create", tmp);
  std::string blob;
  for (const auto& line : lines) {
    blob += line;
    blob += '\n';
  }
  write_all(fd, blob, tmp);
  if (::fsync(fd) != 0) {
    ::close(fd);
    io_failure(Errc::StoreCorrupt, "fsync failed on", tmp);
  }
  ::close(fd);
  if (::rename(tmp.c_str(), path.c_str()) != 0) io_failure(Errc::StoreCorrupt, "cannot replace", path);
  sync_directory(path.parent_path());
}

// Keyed table kept in insertion order.
template <typename Record, typename Key>
class Table {
 public:
  using KeyFn = std::function<Key(const Record&)>;

  explicit Table(KeyFn key) : key_(std::move(key)) {}

  const std::vector<Record>& rows() const noexcept { return rows_; }

  const Record* find(const Key& k) const {
    const auto it = std::find_if(rows_.begin(), rows_.end(), [&](const Record& r) { return key_(r) == k; });
    return it == rows_.end() ? nullptr : &*it;
  }

  std::vector<Record> with(const Record& record) const {
    auto next = rows_;
    const auto k = key_(record);
    const auto it = std::find_if(next.begin(), next.end(), [&](const Record& r) { return key_(r) == k; });
    if (it == next.end()) {
      next.push_back(record);
    } else {
      *it = record;
    }
    return next;
  }

  void replace(std::vector<Record> rows) { rows_ = std::move(rows); }

  void load_row(const Record& record) { rows_ = with(record); }

 private:
  KeyFn key_;
  std::vector<Record> rows_;
};

}  // namespace

struct Store::Impl {
  fs::path dir;
  Table<StaffRecord, std::string> staff{[](const StaffRecord& r) { return r.staff_id; }};
  Table<TagRecord, std::uint32_t> tags{[](const TagRecord& r) { return r.uid; }};
  Table<AreaConfig, std::uint8_t> readers{[](const AreaConfig& r) { return r.reader_id; }};
  Table<AreaPolicy, std::string> areas{[](const AreaPolicy& r) { return r.area_id; }};
  std::vector<AccessEvent> events;
  int events_fd = -1;

  ~Impl() {
    if (events_fd >= 0) ::close(events_fd);
  }

  bool persistent() const { return !dir.empty(); }

  template <typename Record>
  void persist(const char* file, const std::vector<Record>& rows) {
    if (!persistent()) return;
    std::vector<std::string> lines;
    lines.reserve(rows.size());
    for (const auto& r : rows) lines.push_back(to_json(r).dump());
    rewrite_file(dir / file, lines);
  }

  template <typename Fn>
  static void read_lines(const fs::path& path, bool tolerate_torn_tail, Fn&& on_record) {
    if (!fs::exists(path)) return;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::StoreCorrupt, "cannot read " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string content = buf.str();
    std::size_t start = 0;
    int line_no = 0;
    while (start < content.size()) {
      ++line_no;
      const auto nl = content.find('\n', start);
      if (nl == std::string::npos) {
        if (tolerate_torn_tail) {
          // A crash mid-append leaves a partial last record; it was never acknowledged.
          fs::resize_file(path, start);
          return;
        }
        throw Error(Errc::StoreCorrupt, path.string() + ": unterminated last record");
      }
      const std::string_view line(content.data() + start, nl - start);
      start = nl + 1;
      if (line.empty()) continue;
      try {
        on_record(Json::parse(line));
      } catch (const Json::exception& e) {
        throw Error(Errc::StoreCorrupt, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
      } catch (const Error& e) {
        throw Error(Errc::StoreCorrupt, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
      }
    }
  }
};

Store::Store(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
Store::Store(Store&&) noexcept = default;
Store& Store::operator=(Store&&) noexcept = default;
Store::~Store() = default;

Store Store::in_memory() { return Store(std::make_unique<Impl>()); }

Store Store::open(const fs::path& dir) {
  if (dir.empty()) throw Error(Errc::ConfigInvalid, "data directory must not be empty");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw Error(Errc::ConfigInvalid, "cannot create data directory " + dir.string() +
                                         (ec ? ": " + ec.message() : std::string()));
  }
  auto impl = std::make_unique<Impl>();
  impl->dir = dir;

  Impl::read_lines(dir / kStaffFile, false, [&](const Json& j) { impl->staff.load_row(staff_from_json(j)); });
  Impl::read_lines(dir / kTagsFile, false, [&](const Json& j) { impl->tags.load_row(tag_from_json(j)); });
  Impl::read_lines(dir / kReadersFile, false, [&](const Json& j) { impl->readers.load_row(reader_from_json(j)); });
  Impl::read_lines(dir / kAreasFile, false, [&](const Json& j) { impl->areas.load_row(area_from_json(j)); });
  Impl::read_lines(dir / kEventsFile, true, [&](const Json& j) {
    auto e = event_from_json(j);
    if (e.seq != impl->events.size() + 1) {
      throw Error(Errc::StoreCorrupt, "access log seq " + std::to_string(e.seq) + " out of sequence");
    }
    impl->events.push_back(std::move(e));
  });

  const fs::path events_path = dir / kEventsFile;
  impl->events_fd = ::open(events_path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (impl->events_fd < 0) io_failure(Errc::ConfigInvalid, "cannot open", events_path);
  sync_directory(dir);
  return Store(std::move(impl));
}

bool Store::persistent() const noexcept { return impl_->persistent(); }
const fs::path& Store::directory() const noexcept { return impl_->dir; }

void Store::upsert_staff(const StaffRecord& record) {
  if (record.staff_id.empty()) throw Error(Errc::InvalidArgument, "staff_id must not be empty");
  if (record.tag_uid) {
    const auto owner = find_staff_by_tag(*record.tag_uid);
    if (owner && owner->staff_id != record.staff_id) {
      throw Error(Errc::TagAlreadyAssigned,
                  "tag " + std::to_string(*record.tag_uid) + " is assigned to " + owner->staff_id);
    }
  }
  auto rows = impl_->staff.with(record);
  impl_->persist(kStaffFile, rows);
  impl_->staff.replace(std::move(rows));
}

std::optional<StaffRecord> Store::find_staff(std::string_view staff_id) const {
  const auto* r = impl_->staff.find(std::string(staff_id));
  return r ? std::optional(*r) : std::nullopt;
}

StaffRecord Store::get_staff(std::string_view staff_id) const {
  if (auto r = find_staff(staff_id)) return *r;
  throw Error(Errc::NotFound, "no staff record '" + std::string(staff_id) + "'");
}

std::optional<StaffRecord> Store::find_staff_by_tag(std::uint32_t uid) const {
  for (const auto& r : impl_->staff.rows()) {
    if (r.tag_uid == uid) return r;
  }
  return std::nullopt;
}

const std::vector<StaffRecord>& Store::staff() const noexcept { return impl_->staff.rows(); }

void Store::upsert_tag(const TagRecord& record) {
  auto rows = impl_->tags.with(record);
  impl_->persist(kTagsFile, rows);
  impl_->tags.replace(std::move(rows));
}

std::optional<TagRecord> Store::find_tag(std::uint32_t uid) const {
  const auto* r = impl_->tags.find(uid);
  return r ? std::optional(*r) : std::nullopt;
}

TagRecord Store::get_tag(std::uint32_t uid) const {
  if (auto r = find_tag(uid)) return *r;
  throw Error(Errc::NotFound, "no tag " + std::to_string(uid));
}

const std::vector<TagRecord>& Store::tags() const noexcept { return impl_->tags.rows(); }

void Store::upsert_reader(const AreaConfig& record) {
  if (record.area_id.empty()) throw Error(Errc::InvalidArgument, "area_id must not be empty");
  auto rows = impl_->readers.with(record);
  impl_->persist(kReadersFile, rows);
  impl_->readers.replace(std::move(rows));
}

std::optional<AreaConfig> Store::find_reader(std::uint8_t reader_id) const {
  const auto* r = impl_->readers.find(reader_id);
  return r ? std::optional(*r) : std::nullopt;
}

AreaConfig Store::get_reader(std::uint8_t reader_id) const {
  if (auto r = find_reader(reader_id)) return *r;
  throw Error(Errc::NotFound, "reader " + std::to_string(reader_id) + " is not configured");
}

const std::vector<AreaConfig>& Store::readers() const noexcept { return impl_->readers.rows(); }

void Store::upsert_area(const AreaPolicy& record) {
  if (record.area_id.empty()) throw Error(Errc::InvalidArgument, "area_id must not be empty");
  auto rows = impl_->areas.with(record);
  impl_->persist(kAreasFile, rows);
  impl_->areas.replace(std::move(rows));
}

std::optional<AreaPolicy> Store::find_area(std::string_view area_id) const {
  const auto* r = impl_->areas.find(std::string(area_id));
  return r ? std::optional(*r) : std::nullopt;
}

const std::vector<AreaPolicy>& Store::areas() const noexcept { return impl_->areas.rows(); }

void Store::append_event(const AccessEvent& event) {
  if (event.seq != last_seq() + 1) {
    throw Error(Errc::SequenceGap, "expected seq " + std::to_string(last_seq() + 1) + ", got " +
                                       std::to_string(event.seq));
  }
  if (impl_->persistent()) {
    const fs::path path = impl_->dir / kEventsFile;
    write_all(impl_->events_fd, to_json(event).dump() + "\n", path);
    if (::fdatasync(impl_->events_fd) != 0) io_failure(Errc::StoreCorrupt, "fdatasync failed on", path);
  }
  impl_->events.push_back(event);
}

std::uint64_t Store::last_seq() const noexcept {
  return impl_->events.empty() ? 0 : impl_->events.back().seq;
}

const std::vector<AccessEvent>& Store::events() const noexcept { return impl_->events; }

std::vector<AccessEvent> Store::query_events(const EventFilter& filter) const {
  std::vector<AccessEvent> out;
  if (filter.from && filter.to && *filter.from > *filter.to) return out;
  for (const auto& e : impl_->events) {
    if (filter.matches(e)) out.push_back(e);
  }
  return out;
}

std::vector<AccessEvent> Store::events_after(std::uint64_t after, std::size_t limit) const {
  std::vector<AccessEvent> out;
  // seq n lives at index n-1
  for (std::size_t i = static_cast<std::size_t>(std::min<std::uint64_t>(after, impl_->events.size()));
       i < impl_->events.size() && out.size() < limit; ++i) {
    out.push_back(impl_->events[i]);
  }
  return out;
}

}  // namespace rfidac
