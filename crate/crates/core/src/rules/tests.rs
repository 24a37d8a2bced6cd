use std::collections::BTreeSet;
use std::path::PathBuf;

use crate::findings::{Confidence, Finding, Severity};
use crate::frontend::{parse_source, ProjectModel};

use super::*;

fn project(files: &[(&str, &str)]) -> ProjectModel {
    ProjectModel {
        root_path: PathBuf::from("."),
        module_name: "test".to_string(),
        files: files.iter().map(|(p, s)| parse_source(p, s).0).collect(),
        diagnostics: Vec::new(),
    }
}

fn scan_files(files: &[(&str, &str)], config: RuleConfig) -> Vec<Finding> {
    let model = project(files);
    let ctx = AnalysisContext::build(&model, config);
    run_all(&ctx)
}

fn scan(src: &str) -> Vec<Finding> {
    scan_files(&[("main.go", src)], RuleConfig::default())
}

fn rules_hit(findings: &[Finding]) -> BTreeSet<String> {
    findings.iter().map(|f| f.rule_id.clone()).collect()
}

fn with_rule(findings: &[Finding], id: &str) -> Vec<Finding> {
    findings.iter().filter(|f| f.rule_id == id).cloned().collect()
}

#[test]
fn catalog_has_fourteen_rules_in_order() {
    let catalog = rule_catalog();
    assert_eq!(catalog.len(), 14);
    let ids: Vec<&str> = catalog.iter().map(|d| d.id).collect();
    let mut sorted = ids.clone();
    sorted.sort_unstable();
    assert_eq!(ids, sorted);
    let count = |s: Severity| catalog.iter().filter(|d| d.severity == s).count();
    assert_eq!(count(Severity::High), 7);
    assert_eq!(count(Severity::Medium), 2);
    assert_eq!(count(Severity::Low), 5);
}

#[test]
fn config_rejects_unknown_rule() {
    let mut config = RuleConfig::default();
    config.enabled_rules.insert("99".to_string());
    assert!(config.validate().is_err());
}

#[test]
fn config_rejects_non_positive_threshold() {
    let config = RuleConfig {
        min_rsa_bits: 0,
        ..RuleConfig::default()
    };
    assert!(config.validate().is_err());
    let config = RuleConfig {
        min_salt_bytes: -4,
        ..RuleConfig::default()
    };
    assert!(config.validate().is_err());
    assert!(RuleConfig::default().validate().is_ok());
}

#[test]
fn rule01_flags_broken_primitives() {
    let findings = scan(
        r#"package main

import (
	"crypto/md5"
	"crypto/sha1"
	"crypto/sha256"
)

func digest(data []byte) {
	md5.Sum(data)
	sha1.New()
	sha256.New()
}
"#,
    );
    let hits = with_rule(&findings, "01");
    assert_eq!(hits.len(), 2);
    assert!(hits[0].message.contains("MD5"));
    assert!(hits[1].message.contains("SHA-1"));
    assert!(hits.iter().all(|f| f.severity == Severity::High));
    assert!(hits.iter().all(|f| f.confidence == Confidence::High));
}

#[test]
fn rule01_respects_aliasing() {
    // A local package named sha1 that is actually crypto/sha256 stays
    // quiet; an alias of crypto/md5 is caught.
    let findings = scan(
        r#"package main

import (
	sha1 "crypto/sha256"
	digest "crypto/md5"
)

func run(data []byte) {
	sha1.New()
	digest.New()
}
"#,
    );
    let hits = with_rule(&findings, "01");
    assert_eq!(hits.len(), 1);
    assert!(hits[0].message.contains("crypto/md5"));
}

#[test]
fn rule01_dot_import_lowers_confidence() {
    let findings = scan(
        "package main\n\nimport . \"crypto/md5\"\n\nfunc run(b []byte) {\n\tSum(b)\n}\n",
    );
    let hits = with_rule(&findings, "01");
    assert_eq!(hits.len(), 1);
    assert_eq!(hits[0].confidence, Confidence::Medium);
}

#[test]
fn rule02_direct_flow_from_math_rand() {
    let findings = scan(
        r#"package main

import (
	"crypto/aes"
	mrand "math/rand"
)

func badKey() {
	key := make([]byte, 16)
	mrand.Read(key)
	aes.NewCipher(key)
}
"#,
    );
    let hits = with_rule(&findings, "02");
    assert_eq!(hits.len(), 1);
    assert_eq!(hits[0].line, 10, "reported at the source call");
    assert_eq!(hits[0].confidence, Confidence::High);
    assert!(hits[0].message.contains("AES key"));
}

#[test]
fn rule02_sanitizer_breaks_flow() {
    let findings = scan(
        r#"package main

import (
	"crypto/aes"
	crand "crypto/rand"
	mrand "math/rand"
)

func goodKey() {
	key := make([]byte, 16)
	mrand.Read(key)
	crand.Read(key)
	aes.NewCipher(key)
}
"#,
    );
    assert!(with_rule(&findings, "02").is_empty());
}

#[test]
fn rule02_benign_use_not_flagged() {
    let findings = scan(
        r#"package main

import (
	"time"
	mrand "math/rand"
)

func jitter() {
	time.Sleep(time.Duration(mrand.Intn(100)))
}
"#,
    );
    assert!(with_rule(&findings, "02").is_empty());
}

#[test]
fn rule02_wrapper_source_reports_medium() {
    let findings = scan(
        r#"package main

import (
	"crypto/aes"
	mrand "math/rand"
)

func randomBytes(n int) []byte {
	buf := make([]byte, n)
	mrand.Read(buf)
	return buf
}

func useIt() {
	key := randomBytes(16)
	aes.NewCipher(key)
}
"#,
    );
    let hits = with_rule(&findings, "02");
    // One direct hit is impossible here: the sink only sees the wrapper.
    assert_eq!(hits.len(), 1);
    assert_eq!(hits[0].confidence, Confidence::Medium);
    assert!(hits[0].message.contains("randomBytes"));
}

#[test]
fn rule02_wrapper_sink_reports_medium() {
    let findings = scan(
        r#"package main

import (
	"crypto/hmac"
	"crypto/sha256"
	mrand "math/rand"
)

func mac(key []byte) {
	hmac.New(sha256.New, key)
}

func run() {
	key := make([]byte, 32)
	mrand.Read(key)
	mac(key)
}
"#,
    );
    let hits = with_rule(&findings, "02");
    assert_eq!(hits.len(), 1);
    assert_eq!(hits[0].confidence, Confidence::Medium);
}

#[test]
fn rule02_token_material_sink() {
    let findings = scan(
        r#"package main

import (
	"encoding/base64"
	"fmt"
	mrand "math/rand"
)

func sessionToken() string {
	raw := make([]byte, 32)
	mrand.Read(raw)
	return base64.StdEncoding.EncodeToString(raw)
}

func main() { fmt.Println(sessionToken()) }
"#,
    );
    let hits = with_rule(&findings, "02");
    assert_eq!(hits.len(), 1);
    assert!(hits[0].message.contains("token material"));
}

#[test]
fn rule03_deprecated_packages_and_members() {
    let findings = scan(
        r#"package main

import (
	"crypto/dsa"
	"crypto/elliptic"
	"crypto/rand"
	"golang.org/x/crypto/md4"
	"golang.org/x/crypto/openpgp/armor"
)

func run() {
	var params dsa.Parameters
	dsa.GenerateParameters(&params, rand.Reader, dsa.L1024N160)
	md4.New()
	elliptic.Marshal(elliptic.P256(), nil, nil)
	armor.Encode(nil, "PGP MESSAGE", nil)
}
"#,
    );
    let hits = with_rule(&findings, "03");
    // dsa.GenerateParameters, dsa.L1024N160, md4.New, elliptic.Marshal,
    // armor.Encode — the two dsa references sit on one line and dedup.
    assert_eq!(hits.len(), 4);
    assert!(hits.iter().all(|f| f.severity == Severity::Low));
    assert!(hits.iter().any(|f| f.message.contains("crypto/dsa")));
    assert!(hits
        .iter()
        .any(|f| f.message.contains("golang.org/x/crypto/openpgp")));
    assert!(hits.iter().any(|f| f.message.contains("elliptic.Marshal")));
}

#[test]
fn rule03_elliptic_curve_params_not_flagged() {
    let findings = scan(
        r#"package main

import "crypto/elliptic"

func run() {
	elliptic.P256()
}
"#,
    );
    assert!(with_rule(&findings, "03").is_empty());
}

#[test]
fn rule04_literal_keys() {
    let findings = scan(
        r#"package main

import (
	"crypto/aes"
	"crypto/hmac"
	"crypto/sha256"
)

var secret = []byte("0123456789abcdef")

func run() {
	aes.NewCipher(secret)
	hmac.New(sha256.New, []byte("hunter2hunter2hunter2"))
}
"#,
    );
    let hits = with_rule(&findings, "04");
    assert_eq!(hits.len(), 2);
    assert!(hits.iter().all(|f| f.severity == Severity::High));
    assert!(hits.iter().all(|f| f.confidence == Confidence::High));
}

#[test]
fn rule04_random_key_not_flagged() {
    let findings = scan(
        r#"package main

import (
	"crypto/aes"
	"crypto/rand"
)

func run() {
	key := make([]byte, 32)
	rand.Read(key)
	aes.NewCipher(key)
}
"#,
    );
    assert!(with_rule(&findings, "04").is_empty());
}

#[test]
fn rule04_zero_filled_key_is_predictable() {
    let findings = scan(
        r#"package main

import "crypto/aes"

func run() {
	key := make([]byte, 32)
	aes.NewCipher(key)
}
"#,
    );
    assert_eq!(with_rule(&findings, "04").len(), 1);
}

#[test]
fn rule04_jwt_signing_key() {
    let findings = scan(
        r#"package main

import "github.com/golang-jwt/jwt/v5"

func sign(t *jwt.Token) (string, error) {
	return t.SignedString([]byte("secret"))
}
"#,
    );
    let hits = with_rule(&findings, "04");
    assert_eq!(hits.len(), 1);
    assert!(hits[0].message.contains("SignedString"));
}

#[test]
fn rule05_short_rsa_and_hmac() {
    let findings = scan(
        r#"package main

import (
	"crypto/hmac"
	"crypto/rand"
	"crypto/rsa"
	"crypto/sha256"
)

func run() {
	bits := 1024
	rsa.GenerateKey(rand.Reader, bits)
	rsa.GenerateKey(rand.Reader, 2048)
	hmac.New(sha256.New, []byte("short"))
}
"#,
    );
    let hits = with_rule(&findings, "05");
    assert_eq!(hits.len(), 2);
    assert!(hits[0].message.contains("1024"));
    assert!(hits[1].message.contains("5 bytes"));
    assert!(hits.iter().all(|f| f.severity == Severity::Low));
}

#[test]
fn rule05_threshold_monotonicity() {
    let src = r#"package main

import (
	"crypto/rand"
	"crypto/rsa"
)

func run() {
	rsa.GenerateKey(rand.Reader, 1024)
	rsa.GenerateKey(rand.Reader, 2048)
	rsa.GenerateKey(rand.Reader, 3072)
}
"#;
    let counts: Vec<usize> = [1024, 2048, 3072, 4096]
        .into_iter()
        .map(|min| {
            let config = RuleConfig {
                min_rsa_bits: min,
                ..RuleConfig::default()
            };
            with_rule(&scan_files(&[("main.go", src)], config), "05").len()
        })
        .collect();
    assert_eq!(counts, vec![0, 1, 2, 3]);
}

#[test]
fn rule06_static_iv_and_nonce() {
    let findings = scan(
        r#"package main

import (
	"crypto/aes"
	"crypto/cipher"
)

func encrypt(key, plaintext []byte) {
	block, _ := aes.NewCipher(key)
	iv := []byte("0123456789abcdef")
	cipher.NewCBCEncrypter(block, iv)
	gcm, _ := cipher.NewGCM(block)
	nonce := make([]byte, 12)
	gcm.Seal(nil, nonce, plaintext, nil)
}
"#,
    );
    let hits = with_rule(&findings, "06");
    assert_eq!(hits.len(), 2);
    assert!(hits[0].message.contains("static IV"));
    assert!(hits[1].message.contains("AEAD Seal"));
}

#[test]
fn rule06_random_nonce_not_flagged() {
    let findings = scan(
        r#"package main

import (
	"crypto/aes"
	"crypto/cipher"
	"crypto/rand"
)

func encrypt(key, plaintext []byte) {
	block, _ := aes.NewCipher(key)
	gcm, _ := cipher.NewGCM(block)
	nonce := make([]byte, 12)
	rand.Read(nonce)
	gcm.Seal(nil, nonce, plaintext, nil)
}
"#,
    );
    assert!(with_rule(&findings, "06").is_empty());
}

#[test]
fn rule07_short_salt() {
    let findings = scan(
        r#"package main

import (
	"crypto/rand"
	"crypto/sha256"
	"golang.org/x/crypto/pbkdf2"
)

func derive(password []byte) {
	salt := make([]byte, 8)
	rand.Read(salt)
	pbkdf2.Key(password, salt, 600000, 32, sha256.New)
	good := make([]byte, 16)
	rand.Read(good)
	pbkdf2.Key(password, good, 600000, 32, sha256.New)
}
"#,
    );
    let hits = with_rule(&findings, "07");
    assert_eq!(hits.len(), 1);
    assert!(hits[0].message.contains("8 bytes"));
    assert_eq!(hits[0].confidence, Confidence::Medium);
}

#[test]
fn rule08_literal_salt() {
    let findings = scan(
        r#"package main

import (
	"crypto/sha256"
	"golang.org/x/crypto/pbkdf2"
)

func derive(password []byte) {
	pbkdf2.Key(password, []byte("fixed-salt-16byte"), 600000, 32, sha256.New)
}
"#,
    );
    let hits = with_rule(&findings, "08");
    assert_eq!(hits.len(), 1);
    assert!(hits[0].message.contains("constant"));
    assert_eq!(hits[0].confidence, Confidence::High);
}

#[test]
fn rule09_low_iterations_and_cost() {
    let findings = scan(
        r#"package main

import (
	"crypto/sha256"
	"golang.org/x/crypto/bcrypt"
	"golang.org/x/crypto/pbkdf2"
)

func derive(password, salt []byte) {
	pbkdf2.Key(password, salt, 1000, 32, sha256.New)
	pbkdf2.Key(password, salt, 600000, 32, sha256.New)
	bcrypt.GenerateFromPassword(password, 4)
	bcrypt.GenerateFromPassword(password, bcrypt.DefaultCost)
}
"#,
    );
    let hits = with_rule(&findings, "09");
    assert_eq!(hits.len(), 2);
    assert!(hits[0].message.contains("1000"));
    assert!(hits[1].message.contains("cost 4"));
}

#[test]
fn rule10_plain_http() {
    let findings = scan(
        r#"package main

import "net/http"

func fetch() {
	http.Get("http://example.com/data")
	http.Get("https://example.com/data")
	http.Get("http://localhost:8080/healthz")
	http.Get("http://127.0.0.1/metrics")
	http.Post("http://api.internal/submit", "text/plain", nil)
}
"#,
    );
    let hits = with_rule(&findings, "10");
    assert_eq!(hits.len(), 2);
    assert!(hits[0].message.contains("http://example.com"));
    assert!(hits[1].message.contains("http://api.internal"));
    assert!(hits.iter().all(|f| f.severity == Severity::High));
    assert!(hits.iter().all(|f| f.confidence == Confidence::Medium));
}

#[test]
fn rule10_url_through_constant() {
    let findings = scan(
        r#"package main

import "net/http"

const endpoint = "http://example.com/v1"

func fetch() {
	http.Get(endpoint)
}
"#,
    );
    assert_eq!(with_rule(&findings, "10").len(), 1);
}

#[test]
fn rule11_insecure_skip_verify() {
    let findings = scan(
        r#"package main

import "crypto/tls"

func client() *tls.Config {
	cfg := &tls.Config{
		InsecureSkipVerify: true,
	}
	return cfg
}

func mutate(cfg *tls.Config) {
	cfg.InsecureSkipVerify = true
}
"#,
    );
    let hits = with_rule(&findings, "11");
    assert_eq!(hits.len(), 2);
    assert!(hits.iter().all(|f| f.confidence == Confidence::High));
    assert!(hits.iter().all(|f| f.message.contains("InsecureSkipVerify")));
}

#[test]
fn rule11_skip_verify_false_not_flagged() {
    let findings = scan(
        r#"package main

import "crypto/tls"

func client() *tls.Config {
	return &tls.Config{InsecureSkipVerify: false}
}
"#,
    );
    assert!(with_rule(&findings, "11").is_empty());
}

#[test]
fn rule11_outdated_versions() {
    let findings = scan(
        r#"package main

import "crypto/tls"

func configs() {
	a := &tls.Config{
		MinVersion: tls.VersionTLS10,
	}
	b := &tls.Config{
		MaxVersion: tls.VersionSSL30,
	}
	c := &tls.Config{
		MinVersion: tls.VersionTLS12,
	}
	_, _, _ = a, b, c
}
"#,
    );
    let hits = with_rule(&findings, "11");
    assert_eq!(hits.len(), 2);
    assert!(hits[0].message.contains("TLS 1.0"));
    assert!(hits[1].message.contains("SSL 3.0"));
    assert!(hits.iter().all(|f| f.confidence == Confidence::Medium));
}

#[test]
fn rule11_insecure_suites() {
    let findings = scan(
        r#"package main

import "crypto/tls"

func suites() *tls.Config {
	return &tls.Config{
		CipherSuites: []uint16{
			tls.TLS_RSA_WITH_RC4_128_SHA,
			tls.TLS_ECDHE_RSA_WITH_AES_128_GCM_SHA256,
			tls.TLS_RSA_WITH_AES_256_CBC_SHA,
		},
	}
}
"#,
    );
    let hits = with_rule(&findings, "11");
    assert_eq!(hits.len(), 2);
    assert!(hits[0].message.contains("TLS_RSA_WITH_RC4_128_SHA"));
    assert!(hits[1].message.contains("TLS_RSA_WITH_AES_256_CBC_SHA"));
}

#[test]
fn rule12_insecure_ssh_ciphers() {
    let findings = scan(
        r#"package main

import "golang.org/x/crypto/ssh"

func config() *ssh.ClientConfig {
	cfg := &ssh.ClientConfig{}
	cfg.Config.Ciphers = []string{
		"aes128-cbc",
		"aes128-ctr",
		"arcfour256",
	}
	return cfg
}
"#,
    );
    let hits = with_rule(&findings, "12");
    assert_eq!(hits.len(), 2);
    assert!(hits[0].message.contains("aes128-cbc"));
    assert!(hits[1].message.contains("arcfour256"));
    assert!(hits.iter().all(|f| f.severity == Severity::High));
}

#[test]
fn rule12_requires_ssh_import() {
    // The same field name on an unrelated struct stays quiet without the
    // ssh package in scope.
    let findings = scan(
        r#"package main

type box struct{ Ciphers []string }

func config() box {
	return box{Ciphers: []string{"aes128-cbc"}}
}
"#,
    );
    assert!(with_rule(&findings, "12").is_empty());
}

#[test]
fn rule13_insecure_ignore_host_key() {
    let findings = scan(
        r#"package main

import "golang.org/x/crypto/ssh"

func config() *ssh.ClientConfig {
	return &ssh.ClientConfig{
		HostKeyCallback: ssh.InsecureIgnoreHostKey(),
	}
}
"#,
    );
    let hits = with_rule(&findings, "13");
    assert_eq!(hits.len(), 1);
    assert_eq!(hits[0].confidence, Confidence::High);
}

#[test]
fn rule13_nil_returning_callback() {
    let findings = scan(
        r#"package main

import (
	"net"
	"golang.org/x/crypto/ssh"
)

func accept(hostname string, remote net.Addr, key ssh.PublicKey) error {
	return nil
}

func configs() {
	a := &ssh.ClientConfig{
		HostKeyCallback: func(hostname string, remote net.Addr, key ssh.PublicKey) error {
			return nil
		},
	}
	b := &ssh.ClientConfig{
		HostKeyCallback: accept,
	}
	_, _ = a, b
}
"#,
    );
    let hits = with_rule(&findings, "13");
    assert_eq!(hits.len(), 2);
    assert!(hits.iter().all(|f| f.confidence == Confidence::Medium));
}

#[test]
fn rule13_verifying_callback_not_flagged() {
    let findings = scan(
        r#"package main

import (
	"errors"
	"net"
	"golang.org/x/crypto/ssh"
)

func verify(hostname string, remote net.Addr, key ssh.PublicKey) error {
	if hostname == "known.example.com" {
		return nil
	}
	return errors.New("unknown host")
}

func config() *ssh.ClientConfig {
	return &ssh.ClientConfig{HostKeyCallback: verify}
}
"#,
    );
    assert!(with_rule(&findings, "13").is_empty());
}

#[test]
fn rule14_parse_unverified() {
    let findings = scan(
        r#"package main

import "github.com/golang-jwt/jwt/v5"

func peek(raw string) {
	parser := jwt.NewParser()
	parser.ParseUnverified(raw, jwt.MapClaims{})
}
"#,
    );
    let hits = with_rule(&findings, "14");
    assert_eq!(hits.len(), 1);
    assert_eq!(hits[0].confidence, Confidence::High);
}

#[test]
fn rule14_claims_without_valid_check() {
    let findings = scan(
        r#"package main

import (
	"fmt"
	"github.com/golang-jwt/jwt/v5"
)

func read(raw string, keyFn jwt.Keyfunc) {
	token, _ := jwt.Parse(raw, keyFn)
	fmt.Println(token.Claims)
}

func checked(raw string, keyFn jwt.Keyfunc) {
	token, err := jwt.Parse(raw, keyFn)
	if err == nil && token.Valid {
		fmt.Println(token.Claims)
	}
}
"#,
    );
    let hits = with_rule(&findings, "14");
    assert_eq!(hits.len(), 1);
    assert_eq!(hits[0].confidence, Confidence::Low);
    assert!(hits[0].message.contains("token.Valid"));
}

#[test]
fn rule14_tracks_token_through_multi_assignment() {
    // `token, err := ...` defines two names; the sorted def list puts err
    // first, and the detector must still follow token to its Claims read.
    let findings = scan(
        r#"package main

import (
	"fmt"
	"github.com/golang-jwt/jwt/v5"
)

func read(raw string, keyFn jwt.Keyfunc) {
	token, err := jwt.Parse(raw, keyFn)
	if err != nil {
		return
	}
	fmt.Println(token.Claims)
}
"#,
    );
    let hits = with_rule(&findings, "14");
    assert_eq!(hits.len(), 1);
    assert!(hits[0].message.contains("token.Valid"));
}

#[test]
fn rule14_parse_unverified_quiet_in_tests() {
    let src = r#"package main

import "github.com/golang-jwt/jwt/v5"

func peek(raw string) {
	parser := jwt.NewParser()
	parser.ParseUnverified(raw, jwt.MapClaims{})
}
"#;
    let config = RuleConfig {
        exclude_tests: false,
        ..RuleConfig::default()
    };
    let findings = scan_files(&[("main_test.go", src)], config);
    assert!(with_rule(&findings, "14").is_empty());
}

#[test]
fn rule_selection_is_monotone() {
    let src = r#"package main

import (
	"crypto/md5"
	"crypto/aes"
)

func run() {
	md5.New()
	aes.NewCipher([]byte("0123456789abcdef"))
}
"#;
    let all = scan_files(&[("main.go", src)], RuleConfig::default());
    let only01 = scan_files(
        &[("main.go", src)],
        RuleConfig {
            enabled_rules: BTreeSet::from(["01".to_string()]),
            ..RuleConfig::default()
        },
    );
    let fp = |fs: &[Finding]| -> BTreeSet<String> {
        fs.iter().map(|f| f.fingerprint.clone()).collect()
    };
    assert!(fp(&only01).is_subset(&fp(&all)));
    assert_eq!(rules_hit(&only01), BTreeSet::from(["01".to_string()]));
    assert_eq!(rules_hit(&all), BTreeSet::from(["01".to_string(), "04".to_string()]));
}

#[test]
fn test_files_excluded_by_default() {
    let vuln = "package main\n\nimport \"crypto/md5\"\n\nfunc run() { md5.New() }\n";
    let files = [("main.go", vuln), ("main_test.go", vuln)];
    let included = scan_files(
        &files,
        RuleConfig {
            exclude_tests: false,
            ..RuleConfig::default()
        },
    );
    let excluded = scan_files(&files, RuleConfig::default());
    assert_eq!(included.len(), 2);
    assert_eq!(excluded.len(), 1);
    // Exclusion only removes test-file findings; the rest are identical.
    let survivors: Vec<&Finding> =
        included.iter().filter(|f| !f.file.ends_with("_test.go")).collect();
    assert_eq!(survivors.len(), excluded.len());
    assert_eq!(survivors[0].fingerprint, excluded[0].fingerprint);
}

#[test]
fn severity_always_matches_catalog() {
    let src = r#"package main

import (
	"crypto/md5"
	"crypto/tls"
	"net/http"
	"golang.org/x/crypto/pbkdf2"
	"crypto/sha256"
)

func run(password, salt []byte) {
	md5.New()
	http.Get("http://example.com")
	pbkdf2.Key(password, []byte("salty"), 100, 32, sha256.New)
	_ = &tls.Config{InsecureSkipVerify: true}
}
"#;
    let findings = scan(src);
    assert!(!findings.is_empty());
    for f in &findings {
        let desc = rule_by_id(&f.rule_id).expect("finding carries a catalog id");
        assert_eq!(f.severity, desc.severity, "rule {}", f.rule_id);
    }
}

#[test]
fn scan_is_deterministic() {
    let src = r#"package main

import (
	"crypto/md5"
	"crypto/sha1"
	"crypto/tls"
	mrand "math/rand"
	"crypto/aes"
)

func run() {
	md5.New()
	sha1.New()
	key := make([]byte, 16)
	mrand.Read(key)
	aes.NewCipher(key)
	_ = &tls.Config{InsecureSkipVerify: true, MinVersion: tls.VersionTLS10}
}
"#;
    let a = serde_json::to_string(&scan(src)).unwrap();
    let b = serde_json::to_string(&scan(src)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn findings_sorted_and_deduplicated() {
    // Two insecure suites on one line collapse to a single finding; order
    // is (file, line, rule).
    let findings = scan(
        r#"package main

import (
	"crypto/md5"
	"crypto/tls"
)

func run() {
	_ = &tls.Config{CipherSuites: []uint16{tls.TLS_RSA_WITH_RC4_128_SHA, tls.TLS_RSA_WITH_AES_256_CBC_SHA}}
	md5.New()
}
"#,
    );
    assert_eq!(findings.len(), 2);
    assert_eq!(findings[0].rule_id, "11");
    assert_eq!(findings[1].rule_id, "01");
    assert!(findings[0].line < findings[1].line);
    let keys: BTreeSet<(String, u32, String)> = findings
        .iter()
        .map(|f| (f.file.clone(), f.line, f.rule_id.clone()))
        .collect();
    assert_eq!(keys.len(), findings.len());
}

#[test]
fn unparsable_file_is_skipped() {
    let files = [
        ("broken.go", "package main\n\nfunc {{{\n"),
        (
            "ok.go",
            "package main\n\nimport \"crypto/md5\"\n\nfunc run() { md5.New() }\n",
        ),
    ];
    let findings = scan_files(&files, RuleConfig::default());
    assert_eq!(findings.len(), 1);
    assert_eq!(findings[0].file, "ok.go");
}
