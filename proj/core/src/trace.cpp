#include "treelab/trace.hpp"

#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace treelab {

void RunTrace::append(TraceRecord record) {
  if (record.iteration != records_.size() + 1) {
    throw std::logic_error("trace iterations must increase by one starting at 1");
  }
  if (depth_cap_ && record.depth() > *depth_cap_) {
    throw std::logic_error("split at depth " + std::to_string(record.depth()) + " exceeds cap " +
                           std::to_string(*depth_cap_));
  }
  records_.push_back(std::move(record));
}

void RunTrace::write(std::ostream& out, bool full_precision) const {
  const auto flags = out.flags();
  const auto precision = out.precision();
  if (full_precision) {
    out << std::setprecision(std::numeric_limits<double>::max_digits10) << std::defaultfloat;
  } else {
    out << std::fixed << std::setprecision(6);
  }
  for (const auto& r : records_) {
    out << r.iteration << ' ' << r.leaf.encode() << ' ' << r.depth() << ' ' << r.coord + 1 << ' '
        << r.gain << ' ' << r.size_estimate << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

RunTrace RunTrace::read(std::istream& in) {
  RunTrace trace;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    TraceRecord r;
    std::string path;
    std::size_t depth = 0;
    std::size_t coord = 0;
    if (!(fields >> r.iteration >> path >> depth >> coord >> r.gain >> r.size_estimate) || coord == 0) {
      throw std::invalid_argument("malformed trace line: " + line);
    }
    r.leaf = LeafPath::decode(path);
    r.coord = coord - 1;
    if (r.leaf.depth() != depth) throw std::invalid_argument("trace depth disagrees with path: " + line);
    trace.append(std::move(r));
  }
  return trace;
}

}  // namespace treelab
