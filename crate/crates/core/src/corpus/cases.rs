//! The benchmark case catalog: for every rule, two seeded positives (one
//! exercising dataflow where the rule is dataflow-based) and one clean
//! twin that uses the same APIs correctly. Rule 11 gets one positive per
//! misconfiguration shape. Sources are static, so generation is
//! byte-deterministic.

use super::CaseVariant;

pub(super) struct CaseTemplate {
    pub name: &'static str,
    pub rule_id: &'static str,
    pub variant: CaseVariant,
    pub source: &'static str,
    /// One marker substring per expected finding; the expectation's line is
    /// the first source line containing it.
    pub needles: &'static [&'static str],
}

const P: CaseVariant = CaseVariant::Positive;
const T: CaseVariant = CaseVariant::CleanTwin;

pub(super) fn templates() -> Vec<CaseTemplate> {
    vec![
        CaseTemplate {
            name: "r01_weak_hash",
            rule_id: "01",
            variant: P,
            needles: &["md5.Sum("],
            source: r#"// Checksums a payload with a digest that has practical collision attacks.
package main

import (
	"crypto/md5"
	"fmt"
)

func main() {
	sum := md5.Sum([]byte("payload"))
	fmt.Printf("%x\n", sum)
}
"#,
        },
        CaseTemplate {
            name: "r01_weak_cipher",
            rule_id: "01",
            variant: P,
            needles: &["legacy.NewCipher(key)"],
            source: r#"// Encrypts with single DES, reached through an aliased import.
package main

import (
	legacy "crypto/des"
	"crypto/rand"
	"fmt"
)

func main() {
	key := make([]byte, 8)
	if _, err := rand.Read(key); err != nil {
		panic(err)
	}
	block, err := legacy.NewCipher(key)
	fmt.Println(block, err)
}
"#,
        },
        CaseTemplate {
            name: "r01_modern",
            rule_id: "01",
            variant: T,
            needles: &[],
            source: r#"// The same flow with a current digest and cipher.
package main

import (
	"crypto/aes"
	"crypto/rand"
	"crypto/sha256"
	"fmt"
)

func main() {
	sum := sha256.Sum256([]byte("payload"))
	key := make([]byte, 32)
	if _, err := rand.Read(key); err != nil {
		panic(err)
	}
	block, err := aes.NewCipher(key)
	fmt.Println(sum, block, err)
}
"#,
        },
        CaseTemplate {
            name: "r02_direct",
            rule_id: "02",
            variant: P,
            needles: &["mrand.Read(key)"],
            source: r#"// Fills key material from the seedable deterministic generator.
package main

import (
	"crypto/aes"
	"fmt"
	mrand "math/rand"
)

func main() {
	key := make([]byte, 32)
	mrand.Read(key)
	block, err := aes.NewCipher(key)
	fmt.Println(block, err)
}
"#,
        },
        CaseTemplate {
            name: "r02_wrapped",
            rule_id: "02",
            variant: P,
            needles: &["key := randomKey()"],
            source: r#"// Key material comes from the deterministic generator one call away.
package main

import (
	"crypto/aes"
	"fmt"
	mrand "math/rand"
)

func randomKey() []byte {
	buf := make([]byte, 32)
	mrand.Read(buf)
	return buf
}

func main() {
	key := randomKey()
	block, err := aes.NewCipher(key)
	fmt.Println(block, err)
}
"#,
        },
        CaseTemplate {
            name: "r02_crypto_rand",
            rule_id: "02",
            variant: T,
            needles: &[],
            source: r#"// The same wrapper backed by the operating system entropy source.
package main

import (
	"crypto/aes"
	"crypto/rand"
	"fmt"
)

func randomKey() []byte {
	buf := make([]byte, 32)
	if _, err := rand.Read(buf); err != nil {
		panic(err)
	}
	return buf
}

func main() {
	key := randomKey()
	block, err := aes.NewCipher(key)
	fmt.Println(block, err)
}
"#,
        },
        CaseTemplate {
            name: "r03_dsa",
            rule_id: "03",
            variant: P,
            needles: &["dsa.GenerateParameters("],
            source: r#"// Generates parameters for a signature scheme dropped from modern guidance.
package main

import (
	"crypto/dsa"
	"crypto/rand"
	"fmt"
)

func main() {
	var params dsa.Parameters
	err := dsa.GenerateParameters(&params, rand.Reader, dsa.L1024N160)
	fmt.Println(params.P, err)
}
"#,
        },
        CaseTemplate {
            name: "r03_marshal",
            rule_id: "03",
            variant: P,
            needles: &["elliptic.Marshal("],
            source: r#"// Serializes a public point with the deprecated curve marshaller.
package main

import (
	"crypto/elliptic"
	"fmt"
	"math/big"
)

func main() {
	curve := elliptic.P256()
	x := big.NewInt(1)
	y := big.NewInt(2)
	data := elliptic.Marshal(curve, x, y)
	fmt.Printf("%x\n", data)
}
"#,
        },
        CaseTemplate {
            name: "r03_supported",
            rule_id: "03",
            variant: T,
            needles: &[],
            source: r#"// Uses the curve through supported operations only.
package main

import (
	"crypto/ecdsa"
	"crypto/elliptic"
	"crypto/rand"
	"fmt"
)

func main() {
	key, err := ecdsa.GenerateKey(elliptic.P256(), rand.Reader)
	if err != nil {
		panic(err)
	}
	fmt.Println(key.PublicKey.X)
}
"#,
        },
        CaseTemplate {
            name: "r04_literal_key",
            rule_id: "04",
            variant: P,
            needles: &["aes.NewCipher([]byte("],
            source: r#"// Encrypts with a key spelled out in the source.
package main

import (
	"crypto/aes"
	"fmt"
)

func main() {
	block, err := aes.NewCipher([]byte("0123456789abcdef"))
	fmt.Println(block, err)
}
"#,
        },
        CaseTemplate {
            name: "r04_zero_key",
            rule_id: "04",
            variant: P,
            needles: &["hmac.New(sha256.New, key)"],
            source: r#"// Authenticates with an all-zero key: allocated but never randomized.
package main

import (
	"crypto/hmac"
	"crypto/sha256"
	"fmt"
)

func main() {
	key := make([]byte, 32)
	mac := hmac.New(sha256.New, key)
	mac.Write([]byte("message"))
	fmt.Printf("%x\n", mac.Sum(nil))
}
"#,
        },
        CaseTemplate {
            name: "r04_random_key",
            rule_id: "04",
            variant: T,
            needles: &[],
            source: r#"// The same primitives with keys drawn from the entropy source.
package main

import (
	"crypto/aes"
	"crypto/hmac"
	"crypto/rand"
	"crypto/sha256"
	"fmt"
)

func main() {
	k1 := make([]byte, 32)
	if _, err := rand.Read(k1); err != nil {
		panic(err)
	}
	block, err := aes.NewCipher(k1)
	k2 := make([]byte, 32)
	if _, err := rand.Read(k2); err != nil {
		panic(err)
	}
	mac := hmac.New(sha256.New, k2)
	mac.Write([]byte("message"))
	fmt.Println(block, err, mac.Sum(nil))
}
"#,
        },
        CaseTemplate {
            name: "r05_short_rsa",
            rule_id: "05",
            variant: P,
            needles: &["rsa.GenerateKey(rand.Reader, 1024)"],
            source: r#"// Generates an RSA key below the accepted modulus size.
package main

import (
	"crypto/rand"
	"crypto/rsa"
	"fmt"
)

func main() {
	key, err := rsa.GenerateKey(rand.Reader, 1024)
	if err != nil {
		panic(err)
	}
	fmt.Println(key.N.BitLen())
}
"#,
        },
        CaseTemplate {
            name: "r05_short_hmac",
            rule_id: "05",
            variant: P,
            needles: &["hmac.New(sha256.New, key)"],
            source: r#"// Authenticates with an 8-byte secret, shorter than the digest block.
package main

import (
	"crypto/hmac"
	"crypto/rand"
	"crypto/sha256"
	"fmt"
)

func main() {
	key := make([]byte, 8)
	if _, err := rand.Read(key); err != nil {
		panic(err)
	}
	mac := hmac.New(sha256.New, key)
	fmt.Printf("%x\n", mac.Sum(nil))
}
"#,
        },
        CaseTemplate {
            name: "r05_full_strength",
            rule_id: "05",
            variant: T,
            needles: &[],
            source: r#"// Key sizes meeting current guidance.
package main

import (
	"crypto/hmac"
	"crypto/rand"
	"crypto/rsa"
	"crypto/sha256"
	"fmt"
)

func main() {
	key, err := rsa.GenerateKey(rand.Reader, 2048)
	if err != nil {
		panic(err)
	}
	secret := make([]byte, 32)
	if _, err := rand.Read(secret); err != nil {
		panic(err)
	}
	mac := hmac.New(sha256.New, secret)
	fmt.Println(key.Size(), mac.Sum(nil))
}
"#,
        },
        CaseTemplate {
            name: "r06_fixed_iv",
            rule_id: "06",
            variant: P,
            needles: &["cipher.NewCBCEncrypter(block, iv)"],
            source: r#"// CBC encryption with an initialization vector fixed in the source.
package main

import (
	"crypto/aes"
	"crypto/cipher"
	"crypto/rand"
	"fmt"
)

func main() {
	key := make([]byte, 32)
	if _, err := rand.Read(key); err != nil {
		panic(err)
	}
	block, err := aes.NewCipher(key)
	if err != nil {
		panic(err)
	}
	iv := []byte("0123456789abcdef")
	mode := cipher.NewCBCEncrypter(block, iv)
	fmt.Println(mode.BlockSize())
}
"#,
        },
        CaseTemplate {
            name: "r06_fixed_nonce",
            rule_id: "06",
            variant: P,
            needles: &["aead.Seal(nil, nonce"],
            source: r#"// AEAD sealing with an all-zero nonce.
package main

import (
	"crypto/aes"
	"crypto/cipher"
	"crypto/rand"
	"fmt"
)

func main() {
	key := make([]byte, 32)
	if _, err := rand.Read(key); err != nil {
		panic(err)
	}
	block, err := aes.NewCipher(key)
	if err != nil {
		panic(err)
	}
	aead, err := cipher.NewGCM(block)
	if err != nil {
		panic(err)
	}
	nonce := make([]byte, 12)
	sealed := aead.Seal(nil, nonce, []byte("secret"), nil)
	fmt.Printf("%x\n", sealed)
}
"#,
        },
        CaseTemplate {
            name: "r06_random_nonce",
            rule_id: "06",
            variant: T,
            needles: &[],
            source: r#"// Fresh IV and nonce from the entropy source for every message.
package main

import (
	"crypto/aes"
	"crypto/cipher"
	"crypto/rand"
	"fmt"
)

func main() {
	key := make([]byte, 32)
	if _, err := rand.Read(key); err != nil {
		panic(err)
	}
	block, err := aes.NewCipher(key)
	if err != nil {
		panic(err)
	}
	iv := make([]byte, 16)
	if _, err := rand.Read(iv); err != nil {
		panic(err)
	}
	mode := cipher.NewCBCEncrypter(block, iv)
	aead, err := cipher.NewGCM(block)
	if err != nil {
		panic(err)
	}
	nonce := make([]byte, 12)
	if _, err := rand.Read(nonce); err != nil {
		panic(err)
	}
	sealed := aead.Seal(nil, nonce, []byte("secret"), nil)
	fmt.Println(mode.BlockSize(), len(sealed))
}
"#,
        },
        CaseTemplate {
            name: "r07_short_pbkdf2",
            rule_id: "07",
            variant: P,
            needles: &["pbkdf2.Key("],
            source: r#"// Derives a key over a salt half the recommended length.
package main

import (
	"crypto/rand"
	"crypto/sha256"
	"fmt"

	"golang.org/x/crypto/pbkdf2"
)

func main() {
	salt := make([]byte, 8)
	if _, err := rand.Read(salt); err != nil {
		panic(err)
	}
	dk := pbkdf2.Key([]byte("password"), salt, 10000, 32, sha256.New)
	fmt.Printf("%x\n", dk)
}
"#,
        },
        CaseTemplate {
            name: "r07_short_scrypt",
            rule_id: "07",
            variant: P,
            needles: &["scrypt.Key("],
            source: r#"// Memory-hard derivation over a 12-byte salt.
package main

import (
	"crypto/rand"
	"fmt"

	"golang.org/x/crypto/scrypt"
)

func main() {
	salt := make([]byte, 12)
	if _, err := rand.Read(salt); err != nil {
		panic(err)
	}
	dk, err := scrypt.Key([]byte("password"), salt, 32768, 8, 1, 32)
	if err != nil {
		panic(err)
	}
	fmt.Printf("%x\n", dk)
}
"#,
        },
        CaseTemplate {
            name: "r07_full_salt",
            rule_id: "07",
            variant: T,
            needles: &[],
            source: r#"// Full-length random salts for both derivations.
package main

import (
	"crypto/rand"
	"crypto/sha256"
	"fmt"

	"golang.org/x/crypto/pbkdf2"
	"golang.org/x/crypto/scrypt"
)

func main() {
	salt := make([]byte, 16)
	if _, err := rand.Read(salt); err != nil {
		panic(err)
	}
	dk1 := pbkdf2.Key([]byte("password"), salt, 10000, 32, sha256.New)
	dk2, err := scrypt.Key([]byte("password"), salt, 32768, 8, 1, 32)
	if err != nil {
		panic(err)
	}
	fmt.Printf("%x %x\n", dk1, dk2)
}
"#,
        },
        CaseTemplate {
            name: "r08_fixed_pbkdf2",
            rule_id: "08",
            variant: P,
            needles: &["pbkdf2.Key("],
            source: r#"// Every derivation reuses the salt written into the program.
package main

import (
	"crypto/sha256"
	"fmt"

	"golang.org/x/crypto/pbkdf2"
)

func main() {
	salt := []byte("app-static-salt!")
	dk := pbkdf2.Key([]byte("password"), salt, 10000, 32, sha256.New)
	fmt.Printf("%x\n", dk)
}
"#,
        },
        CaseTemplate {
            name: "r08_fixed_argon2",
            rule_id: "08",
            variant: P,
            needles: &["argon2.IDKey("],
            source: r#"// Password hashing with an inline constant salt.
package main

import (
	"fmt"

	"golang.org/x/crypto/argon2"
)

func main() {
	dk := argon2.IDKey([]byte("password"), []byte("fixed-salt-16byt"), 1, 65536, 4, 32)
	fmt.Printf("%x\n", dk)
}
"#,
        },
        CaseTemplate {
            name: "r08_random_salt",
            rule_id: "08",
            variant: T,
            needles: &[],
            source: r#"// A fresh random salt per derivation.
package main

import (
	"crypto/rand"
	"crypto/sha256"
	"fmt"

	"golang.org/x/crypto/argon2"
	"golang.org/x/crypto/pbkdf2"
)

func main() {
	salt := make([]byte, 16)
	if _, err := rand.Read(salt); err != nil {
		panic(err)
	}
	dk1 := pbkdf2.Key([]byte("password"), salt, 10000, 32, sha256.New)
	dk2 := argon2.IDKey([]byte("password"), salt, 1, 65536, 4, 32)
	fmt.Printf("%x %x\n", dk1, dk2)
}
"#,
        },
        CaseTemplate {
            name: "r09_low_pbkdf2",
            rule_id: "09",
            variant: P,
            needles: &["pbkdf2.Key("],
            source: r#"// Key stretching with far too few rounds.
package main

import (
	"crypto/rand"
	"crypto/sha256"
	"fmt"

	"golang.org/x/crypto/pbkdf2"
)

func main() {
	salt := make([]byte, 16)
	if _, err := rand.Read(salt); err != nil {
		panic(err)
	}
	dk := pbkdf2.Key([]byte("password"), salt, 1000, 32, sha256.New)
	fmt.Printf("%x\n", dk)
}
"#,
        },
        CaseTemplate {
            name: "r09_low_bcrypt",
            rule_id: "09",
            variant: P,
            needles: &["bcrypt.GenerateFromPassword("],
            source: r#"// Hashes passwords at a trivially brute-forceable cost.
package main

import (
	"fmt"

	"golang.org/x/crypto/bcrypt"
)

func main() {
	hash, err := bcrypt.GenerateFromPassword([]byte("password"), 4)
	if err != nil {
		panic(err)
	}
	fmt.Printf("%s\n", hash)
}
"#,
        },
        CaseTemplate {
            name: "r09_strong_rounds",
            rule_id: "09",
            variant: T,
            needles: &[],
            source: r#"// Work factors meeting current guidance.
package main

import (
	"crypto/rand"
	"crypto/sha256"
	"fmt"

	"golang.org/x/crypto/bcrypt"
	"golang.org/x/crypto/pbkdf2"
)

func main() {
	salt := make([]byte, 16)
	if _, err := rand.Read(salt); err != nil {
		panic(err)
	}
	dk := pbkdf2.Key([]byte("password"), salt, 600000, 32, sha256.New)
	hash, err := bcrypt.GenerateFromPassword([]byte("password"), 12)
	if err != nil {
		panic(err)
	}
	fmt.Printf("%x %s\n", dk, hash)
}
"#,
        },
        CaseTemplate {
            name: "r10_plain_get",
            rule_id: "10",
            variant: P,
            needles: &["http.Get(\"http://example.com"],
            source: r#"// Fetches a remote resource over cleartext HTTP.
package main

import (
	"fmt"
	"io"
	"net/http"
)

func main() {
	resp, err := http.Get("http://example.com/api/status")
	if err != nil {
		panic(err)
	}
	defer resp.Body.Close()
	body, _ := io.ReadAll(resp.Body)
	fmt.Println(len(body))
}
"#,
        },
        CaseTemplate {
            name: "r10_plain_request",
            rule_id: "10",
            variant: P,
            needles: &["http.NewRequest("],
            source: r#"// Builds a request to a cleartext endpoint held in a variable.
package main

import (
	"fmt"
	"net/http"
	"strings"
)

func main() {
	endpoint := "http://api.example.com/v1/submit"
	req, err := http.NewRequest("POST", endpoint, strings.NewReader("{}"))
	if err != nil {
		panic(err)
	}
	fmt.Println(req.URL)
}
"#,
        },
        CaseTemplate {
            name: "r10_tls_endpoints",
            rule_id: "10",
            variant: T,
            needles: &[],
            source: r#"// The same calls against encrypted and loopback endpoints.
package main

import (
	"fmt"
	"net/http"
	"strings"
)

func main() {
	resp, err := http.Get("https://example.com/api/status")
	if err == nil {
		resp.Body.Close()
	}
	health, err := http.NewRequest("GET", "http://127.0.0.1:8080/healthz", strings.NewReader(""))
	fmt.Println(health, err)
}
"#,
        },
        CaseTemplate {
            name: "r11_skip_verify",
            rule_id: "11",
            variant: P,
            needles: &["InsecureSkipVerify: true"],
            source: r#"// Disables certificate chain and hostname verification.
package main

import (
	"crypto/tls"
	"fmt"
	"net/http"
)

func main() {
	transport := &http.Transport{
		TLSClientConfig: &tls.Config{
			InsecureSkipVerify: true,
		},
	}
	client := &http.Client{Transport: transport}
	fmt.Println(client != nil)
}
"#,
        },
        CaseTemplate {
            name: "r11_old_version",
            rule_id: "11",
            variant: P,
            needles: &["MinVersion: tls.VersionTLS10"],
            source: r#"// Pins the TLS floor to a downgrade-prone protocol version.
package main

import (
	"crypto/tls"
	"fmt"
)

func main() {
	cfg := &tls.Config{
		MinVersion: tls.VersionTLS10,
	}
	fmt.Println(cfg.MinVersion)
}
"#,
        },
        CaseTemplate {
            name: "r11_weak_suites",
            rule_id: "11",
            variant: P,
            needles: &["tls.TLS_RSA_WITH_AES_128_CBC_SHA,"],
            source: r#"// Keeps an RSA-key-exchange suite in the offer list.
package main

import (
	"crypto/tls"
	"fmt"
)

func main() {
	cfg := &tls.Config{
		CipherSuites: []uint16{
			tls.TLS_RSA_WITH_AES_128_CBC_SHA,
			tls.TLS_ECDHE_RSA_WITH_AES_128_GCM_SHA256,
		},
	}
	fmt.Println(len(cfg.CipherSuites))
}
"#,
        },
        CaseTemplate {
            name: "r11_hardened",
            rule_id: "11",
            variant: T,
            needles: &[],
            source: r#"// Modern client TLS: verification on, 1.2 floor, AEAD suites.
package main

import (
	"crypto/tls"
	"fmt"
)

func main() {
	cfg := &tls.Config{
		MinVersion: tls.VersionTLS12,
		CipherSuites: []uint16{
			tls.TLS_ECDHE_ECDSA_WITH_AES_256_GCM_SHA384,
			tls.TLS_CHACHA20_POLY1305_SHA256,
		},
	}
	fmt.Println(cfg.MinVersion)
}
"#,
        },
        CaseTemplate {
            name: "r12_cbc_cipher",
            rule_id: "12",
            variant: P,
            needles: &["\"aes128-cbc\","],
            source: r#"// Offers a CBC-mode transport cipher to the SSH server.
package main

import (
	"fmt"

	"golang.org/x/crypto/ssh"
)

func main() {
	config := &ssh.ClientConfig{
		User: "deploy",
		Config: ssh.Config{
			Ciphers: []string{
				"aes128-cbc",
				"aes128-ctr",
			},
		},
	}
	fmt.Println(config.User)
}
"#,
        },
        CaseTemplate {
            name: "r12_arcfour",
            rule_id: "12",
            variant: P,
            needles: &["config.Ciphers = []string{\"arcfour256\"}"],
            source: r#"// Re-enables an RC4-era stream cipher by assignment.
package main

import (
	"fmt"

	"golang.org/x/crypto/ssh"
)

func main() {
	var config ssh.ClientConfig
	config.Ciphers = []string{"arcfour256"}
	fmt.Println(len(config.Ciphers))
}
"#,
        },
        CaseTemplate {
            name: "r12_modern_ciphers",
            rule_id: "12",
            variant: T,
            needles: &[],
            source: r#"// Restricts the transport to AEAD ciphers.
package main

import (
	"fmt"

	"golang.org/x/crypto/ssh"
)

func main() {
	config := &ssh.ClientConfig{
		User: "deploy",
		Config: ssh.Config{
			Ciphers: []string{
				"aes256-gcm@openssh.com",
				"chacha20-poly1305@openssh.com",
			},
		},
	}
	fmt.Println(config.User)
}
"#,
        },
        CaseTemplate {
            name: "r13_ignore_hostkey",
            rule_id: "13",
            variant: P,
            needles: &["ssh.InsecureIgnoreHostKey()"],
            source: r#"// Explicitly accepts any host key the server presents.
package main

import (
	"fmt"

	"golang.org/x/crypto/ssh"
)

func main() {
	config := &ssh.ClientConfig{
		User:            "deploy",
		HostKeyCallback: ssh.InsecureIgnoreHostKey(),
	}
	fmt.Println(config.User)
}
"#,
        },
        CaseTemplate {
            name: "r13_nil_callback",
            rule_id: "13",
            variant: P,
            needles: &["HostKeyCallback: func("],
            source: r#"// A hand-rolled callback that approves every server key.
package main

import (
	"fmt"
	"net"

	"golang.org/x/crypto/ssh"
)

func main() {
	config := &ssh.ClientConfig{
		User: "deploy",
		HostKeyCallback: func(hostname string, remote net.Addr, key ssh.PublicKey) error {
			return nil
		},
	}
	fmt.Println(config.User)
}
"#,
        },
        CaseTemplate {
            name: "r13_pinned_hostkey",
            rule_id: "13",
            variant: T,
            needles: &[],
            source: r#"// Pins the expected server key before connecting.
package main

import (
	"fmt"

	"golang.org/x/crypto/ssh"
)

const authorizedKey = "ssh-ed25519 AAAAC3NzaC1lZDI1NTE5AAAAIOMqqnkVzrm0SdG6UOoqKLsabgH5C9okWi0dh2l9GKJl"

func main() {
	hostKey, _, _, _, err := ssh.ParseAuthorizedKey([]byte(authorizedKey))
	if err != nil {
		panic(err)
	}
	config := &ssh.ClientConfig{
		User:            "deploy",
		HostKeyCallback: ssh.FixedHostKey(hostKey),
	}
	fmt.Println(config.User)
}
"#,
        },
        CaseTemplate {
            name: "r14_parse_unverified",
            rule_id: "14",
            variant: P,
            needles: &["ParseUnverified(raw"],
            source: r#"// Decodes a token's claims without checking its signature.
package main

import (
	"fmt"

	"github.com/golang-jwt/jwt/v5"
)

func main() {
	raw := "eyJhbGciOiJIUzI1NiJ9.eyJzdWIiOiJ1c2VyIn0.sig"
	token, _, err := new(jwt.Parser).ParseUnverified(raw, jwt.MapClaims{})
	if err != nil {
		panic(err)
	}
	fmt.Println(token.Claims)
}
"#,
        },
        CaseTemplate {
            name: "r14_unchecked_claims",
            rule_id: "14",
            variant: P,
            needles: &["claims := token.Claims.(jwt.MapClaims)"],
            source: r#"// Parses with signature verification but never consults Valid.
package main

import (
	"fmt"

	"github.com/golang-jwt/jwt/v5"
)

func keyFunc(t *jwt.Token) (interface{}, error) {
	return []byte("service-signing-secret"), nil
}

func main() {
	raw := "eyJhbGciOiJIUzI1NiJ9.eyJzdWIiOiJ1c2VyIn0.sig"
	token, err := jwt.Parse(raw, keyFunc)
	if err != nil {
		panic(err)
	}
	claims := token.Claims.(jwt.MapClaims)
	fmt.Println(claims["sub"])
}
"#,
        },
        CaseTemplate {
            name: "r14_valid_checked",
            rule_id: "14",
            variant: T,
            needles: &[],
            source: r#"// Full verification: parse, then honor the Valid flag before use.
package main

import (
	"fmt"

	"github.com/golang-jwt/jwt/v5"
)

func keyFunc(t *jwt.Token) (interface{}, error) {
	return []byte("service-signing-secret"), nil
}

func main() {
	raw := "eyJhbGciOiJIUzI1NiJ9.eyJzdWIiOiJ1c2VyIn0.sig"
	token, err := jwt.Parse(raw, keyFunc)
	if err != nil {
		panic(err)
	}
	if claims, ok := token.Claims.(jwt.MapClaims); ok && token.Valid {
		fmt.Println(claims["sub"])
	}
}
"#,
        },
    ]
}
