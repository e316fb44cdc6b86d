#ifndef SRFLOW_VERSION_HPP
#define SRFLOW_VERSION_HPP

namespace srflow {

inline const char* version_string() { return "0.1.0"; }

} // namespace srflow

#endif
