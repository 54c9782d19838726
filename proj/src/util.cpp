#include "quso/util.hpp"

#include <fstream>
#include <random>
#include <system_error>

namespace quso {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path.string());
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return content;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open file for writing: " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error("rename failed for " + path.string() + ": " + ec.message());
}

void parallel_for(std::size_t begin, std::size_t end, int threads, std::size_t align,
                  const std::function<void(std::size_t, std::size_t)>& body) {
  if (begin >= end) return;
  const std::size_t total = end - begin;
  int workers = resolve_threads(threads);
  if (align == 0) align = 1;
  std::size_t blocks = (total + align - 1) / align;
  if (static_cast<std::size_t>(workers) > blocks) workers = static_cast<int>(blocks);
  if (workers <= 1) {
    body(begin, end);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  std::size_t per = blocks / static_cast<std::size_t>(workers);
  std::size_t extra = blocks % static_cast<std::size_t>(workers);
  std::size_t cursor = begin;
  for (int w = 0; w < workers; ++w) {
    std::size_t nblocks = per + (static_cast<std::size_t>(w) < extra ? 1 : 0);
    std::size_t chunk_begin = cursor;
    std::size_t chunk_end = std::min(end, chunk_begin + nblocks * align);
    cursor = chunk_end;
    pool.emplace_back([&body, chunk_begin, chunk_end] { body(chunk_begin, chunk_end); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace quso
