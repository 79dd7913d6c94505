#include "pmfht/types.hpp"

namespace pmfht {

void validate_cloud(const PointCloud& cloud) {
  if (cloud.size() < 4) {
    throw InvalidArgument("point cloud needs at least 4 points, got " +
                          std::to_string(cloud.size()));
  }
  if (!cloud.pts.allFinite()) {
    throw InvalidArgument("point cloud contains non-finite coordinates");
  }
}

}  // namespace pmfht
