#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace bnm
{

/// Worker count to use when the caller passes 0.
inline unsigned default_threads()
{
  return std::max( 1u, std::thread::hardware_concurrency() );
}

/// Splits [0, count) into contiguous chunks and calls `fn(begin, end)` for
/// each chunk on its own thread. The first exception thrown by any chunk is
/// rethrown after all threads join.
template<typename Fn>
void parallel_chunks( std::size_t count, unsigned threads, Fn&& fn )
{
  if ( threads == 0 )
  {
    threads = default_threads();
  }
  const std::size_t workers = std::min<std::size_t>( threads, std::max<std::size_t>( count, 1 ) );
  if ( workers <= 1 )
  {
    fn( std::size_t{ 0 }, count );
    return;
  }

  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve( workers );
    for ( std::size_t w = 0; w < workers; ++w )
    {
      const auto begin = count * w / workers;
      const auto end = count * ( w + 1 ) / workers;
      pool.emplace_back( [&, begin, end] {
        try
        {
          fn( begin, end );
        }
        catch ( ... )
        {
          std::lock_guard lock( failure_mutex );
          if ( !failure )
          {
            failure = std::current_exception();
          }
        }
      } );
    }
  }
  if ( failure )
  {
    std::rethrow_exception( failure );
  }
}

} // namespace bnm
