#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "stormtrace/url.hpp"

using namespace stormtrace;

namespace {

const std::string wiki = "http://en.wikipedia.org/w/index.php?title=TinyURL&diff=283621022&oldid=283308287";

errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return errc::invalid_argument;
}

}  // namespace

TEST(NormalizeUrl, LowercasesSchemeAndHostAndDropsFragmentAndDefaultPort) {
  EXPECT_EQ(normalize_url("HTTP://Example.COM:80/a#frag"), "http://example.com/a");
  EXPECT_EQ(normalize_url("https://Example.com:443/"), "https://example.com");
  EXPECT_EQ(normalize_url("https://example.com:8443/x"), "https://example.com:8443/x");
  EXPECT_EQ(normalize_url("http://example.com:443/x"), "http://example.com:443/x");
}

TEST(NormalizeUrl, KeepsMeaningfulQueryStrings) {
  EXPECT_EQ(normalize_url(wiki), wiki);
}

TEST(NormalizeUrl, PathCaseIsPreserved) {
  EXPECT_EQ(normalize_url("http://A.com/Path/To"), "http://a.com/Path/To");
}

TEST(NormalizeUrl, RemovesTrackingParametersOnly) {
  EXPECT_EQ(normalize_url("http://a.com/p?utm_source=x&id=3&UTM_Medium=y"), "http://a.com/p?id=3");
  EXPECT_EQ(normalize_url("http://a.com/p?utm_source=x"), "http://a.com/p");
  EXPECT_EQ(normalize_url("http://a.com/?q=1"), "http://a.com?q=1");
}

TEST(NormalizeUrl, TrailingSlashOnlyDroppedForEmptyPath) {
  EXPECT_EQ(normalize_url("http://a.com/"), "http://a.com");
  EXPECT_EQ(normalize_url("http://a.com/dir/"), "http://a.com/dir/");
}

TEST(NormalizeUrl, EscapesDelimiterCharacters) {
  EXPECT_EQ(normalize_url("http://a.com/x,y?a=b,c"), "http://a.com/x%2Cy?a=b%2Cc");
  EXPECT_EQ(normalize_url("http://a.com/a%2cb"), "http://a.com/a%2Cb");
  EXPECT_EQ(normalize_url("http://a.com/a\"b"), "http://a.com/a%22b");
}

TEST(NormalizeUrl, RejectsMalformedInput) {
  for (const char* bad : {"", "   ", "example.com/a", "://a.com", "http://", "http://:80/x", "http://a.com:8x/",
                          "1ttp://a.com"}) {
    EXPECT_EQ(code_of([&] { normalize_url(bad); }), errc::malformed_url) << bad;
  }
}

TEST(NormalizeUrl, IsIdempotentOnGeneratedUrls) {
  const std::vector<std::string> schemes{"http", "HTTPS", "Ftp"};
  const std::vector<std::string> hosts{"Example.COM", "a.b.c", "[::1]", "user@Host.org", "x.io:0080"};
  const std::vector<std::string> ports{"", ":80", ":443", ":8080", ":"};
  const std::vector<std::string> paths{"", "/", "/A/b/", "/x,y", "/%7euser", "/a b"};
  const std::vector<std::string> queries{"", "?", "?a=1", "?utm_x=1&b=2", "?&&c", "?a=1&utm_campaign=z"};
  const std::vector<std::string> frags{"", "#", "#top"};
  std::mt19937 rng(7);
  auto any = [&](const std::vector<std::string>& v) { return v[rng() % v.size()]; };
  for (int i = 0; i < 2000; ++i) {
    std::string host = any(hosts);
    std::string u = any(schemes) + "://" + host + (host.find(':') == std::string::npos ? any(ports) : "") + any(paths) +
                    any(queries) + any(frags);
    std::string once = normalize_url(u);
    EXPECT_EQ(normalize_url(once), once) << u;
  }
}

TEST(ResolveRedirects, ExpandsShortenedLink) {
  RedirectMap map;
  map.add("http://bit.ly/tinyurlwiki", wiki);
  EXPECT_EQ(resolve_redirects("http://bit.ly/tinyurlwiki", map), wiki);
}

TEST(ResolveRedirects, UnmappedUrlIsUnchanged) {
  RedirectMap map;
  map.add("http://bit.ly/x", "http://a.com/x");
  EXPECT_EQ(resolve_redirects("http://other.com/y", map), "http://other.com/y");
  EXPECT_EQ(resolve_redirects("http://other.com/y", RedirectMap{}), "http://other.com/y");
}

TEST(ResolveRedirects, FollowsChainsTransitively) {
  RedirectMap map;
  map.add("http://a.com", "http://b.com");
  map.add("http://b.com", "HTTP://C.com/#x");
  EXPECT_EQ(resolve_redirects("http://a.com", map), "http://c.com");
}

TEST(ResolveRedirects, DetectsCycles) {
  RedirectMap map;
  map.add("http://a.com", "http://b.com");
  map.add("http://b.com", "http://a.com");
  EXPECT_EQ(code_of([&] { resolve_redirects("http://a.com", map); }), errc::redirect_cycle);

  RedirectMap self;
  self.add("http://a.com", "http://a.com/");
  EXPECT_EQ(code_of([&] { resolve_redirects("http://a.com", self); }), errc::redirect_cycle);
}

TEST(ResolveRedirects, StopsAfterTenHops) {
  RedirectMap map;
  for (int i = 0; i < 15; ++i)
    map.add("http://h" + std::to_string(i) + ".com", "http://h" + std::to_string(i + 1) + ".com");
  EXPECT_EQ(resolve_redirects("http://h0.com", map), "http://h10.com");
}

TEST(RedirectMapFile, ParsesTabSeparatedPairsWithComments) {
  std::istringstream in("# shortener expansions\n\nhttp://bit.ly/tinyurlwiki\t" + wiki + "\r\n  # indented comment\n");
  auto map = read_redirect_map(in);
  ASSERT_EQ(map.entries.size(), 1u);
  EXPECT_EQ(map.entries.at("http://bit.ly/tinyurlwiki"), wiki);
}

TEST(RedirectMapFile, ReportsLineOfBadEntry) {
  std::istringstream in("http://a.com\thttp://b.com\nhttp://c.com http://d.com\n");
  try {
    read_redirect_map(in);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::malformed_record);
    EXPECT_EQ(e.line(), 2u);
  }
  std::istringstream bad_url("nonsense\thttp://b.com\n");
  try {
    read_redirect_map(bad_url);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::malformed_url);
    EXPECT_EQ(e.line(), 1u);
  }
}
