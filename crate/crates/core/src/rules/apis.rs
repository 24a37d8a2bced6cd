//! Tables of crypto-relevant API entry points the detectors match against.
//!
//! Each table row names a package path as written in an import spec, a
//! member (function or method chain), and where relevant the argument
//! position of the sensitive parameter. Keeping these as data makes the
//! detectors short and the coverage auditable in one place.

/// Broken or weak primitives: calling any of these is finding-worthy on its
/// own. `(package, member, what is wrong)`.
pub const INSECURE_PRIMITIVES: &[(&str, &str, &str)] = &[
    ("crypto/md5", "New", "MD5 is a broken hash algorithm"),
    ("crypto/md5", "Sum", "MD5 is a broken hash algorithm"),
    ("crypto/sha1", "New", "SHA-1 is a broken hash algorithm"),
    ("crypto/sha1", "Sum", "SHA-1 is a broken hash algorithm"),
    ("crypto/des", "NewCipher", "DES has a 56-bit effective key"),
    ("crypto/des", "NewTripleDESCipher", "3DES is deprecated and slow"),
    ("crypto/rc4", "NewCipher", "RC4 keystream biases break confidentiality"),
];

/// Packages deprecated for cryptographic use in their entirety.
pub const DEPRECATED_PACKAGES: &[&str] = &[
    "crypto/dsa",
    "golang.org/x/crypto/md4",
    "golang.org/x/crypto/ripemd160",
    "golang.org/x/crypto/cast5",
    "golang.org/x/crypto/blowfish",
    "golang.org/x/crypto/tea",
    "golang.org/x/crypto/xtea",
    "golang.org/x/crypto/twofish",
    "golang.org/x/crypto/openpgp",
];

/// Individually deprecated functions in otherwise-live packages.
pub const DEPRECATED_MEMBERS: &[(&str, &str)] = &[
    ("crypto/elliptic", "Marshal"),
    ("crypto/elliptic", "Unmarshal"),
    ("crypto/elliptic", "GenerateKey"),
];

/// Non-cryptographic PRNG packages (taint sources for rule 02). Any call
/// into these yields attacker-predictable output.
pub const MATH_RAND_PACKAGES: &[&str] = &["math/rand", "math/rand/v2"];

/// Package-qualified calls whose arguments are security-sensitive enough
/// that math/rand-derived input is a finding. `(package, member, label)`;
/// the label finishes the sentence "used as ...".
pub const PRNG_SINKS: &[(&str, &str, &str)] = &[
    ("crypto/aes", "NewCipher", "an AES key"),
    ("crypto/des", "NewCipher", "a DES key"),
    ("crypto/des", "NewTripleDESCipher", "a 3DES key"),
    ("crypto/rc4", "NewCipher", "an RC4 key"),
    ("crypto/hmac", "New", "an HMAC key"),
    ("crypto/cipher", "NewCBCEncrypter", "a CBC IV"),
    ("crypto/cipher", "NewCBCDecrypter", "a CBC IV"),
    ("crypto/cipher", "NewCTR", "a CTR IV"),
    ("crypto/cipher", "NewCFBEncrypter", "a CFB IV"),
    ("crypto/cipher", "NewCFBDecrypter", "a CFB IV"),
    ("crypto/cipher", "NewOFB", "an OFB IV"),
    ("golang.org/x/crypto/chacha20poly1305", "New", "a ChaCha20-Poly1305 key"),
    ("golang.org/x/crypto/chacha20poly1305", "NewX", "an XChaCha20-Poly1305 key"),
    ("golang.org/x/crypto/chacha20", "NewUnauthenticatedCipher", "a ChaCha20 key or nonce"),
    ("golang.org/x/crypto/pbkdf2", "Key", "PBKDF2 input"),
    ("golang.org/x/crypto/scrypt", "Key", "scrypt input"),
    ("golang.org/x/crypto/argon2", "Key", "Argon2 input"),
    ("golang.org/x/crypto/argon2", "IDKey", "Argon2id input"),
    ("golang.org/x/crypto/bcrypt", "GenerateFromPassword", "bcrypt input"),
    ("encoding/base64", "EncodeToString", "token material"),
    ("encoding/hex", "EncodeToString", "token material"),
];

/// Method-call sinks for rule 02 (receiver type unknown; name is specific
/// enough). `(method name, label)`.
pub const PRNG_METHOD_SINKS: &[(&str, &str)] = &[("Seal", "an AEAD nonce")];

/// Key-material parameters: `(package, member, argument index)`. A literal
/// value here is a hardcoded key (rule 04); a short value is rule 05 where
/// listed separately.
pub const KEY_PARAMS: &[(&str, &str, usize)] = &[
    ("crypto/hmac", "New", 1),
    ("crypto/aes", "NewCipher", 0),
    ("crypto/des", "NewCipher", 0),
    ("crypto/des", "NewTripleDESCipher", 0),
    ("crypto/rc4", "NewCipher", 0),
    ("golang.org/x/crypto/chacha20poly1305", "New", 0),
    ("golang.org/x/crypto/chacha20poly1305", "NewX", 0),
    ("golang.org/x/crypto/chacha20", "NewUnauthenticatedCipher", 0),
];

/// IV / nonce parameters: `(package, member, argument index)`.
pub const IV_PARAMS: &[(&str, &str, usize)] = &[
    ("crypto/cipher", "NewCBCEncrypter", 1),
    ("crypto/cipher", "NewCBCDecrypter", 1),
    ("crypto/cipher", "NewCTR", 1),
    ("crypto/cipher", "NewCFBEncrypter", 1),
    ("crypto/cipher", "NewCFBDecrypter", 1),
    ("crypto/cipher", "NewOFB", 1),
    ("golang.org/x/crypto/chacha20", "NewUnauthenticatedCipher", 1),
];

/// Salt parameters of the password-based KDFs: `(package, member, index)`.
pub const SALT_PARAMS: &[(&str, &str, usize)] = &[
    ("golang.org/x/crypto/pbkdf2", "Key", 1),
    ("golang.org/x/crypto/scrypt", "Key", 1),
    ("golang.org/x/crypto/argon2", "Key", 1),
    ("golang.org/x/crypto/argon2", "IDKey", 1),
];

/// Plain-HTTP request constructors in net/http and the index of their URL
/// argument.
pub const HTTP_URL_ARGS: &[(&str, usize)] = &[
    ("Get", 0),
    ("Head", 0),
    ("Post", 0),
    ("PostForm", 0),
    ("NewRequest", 1),
    ("NewRequestWithContext", 2),
];

/// Import paths of the JWT libraries rule 14 understands.
pub const JWT_PACKAGES: &[&str] = &[
    "github.com/golang-jwt/jwt",
    "github.com/golang-jwt/jwt/v4",
    "github.com/golang-jwt/jwt/v5",
    "github.com/dgrijalva/jwt-go",
    "github.com/dgrijalva/jwt-go/v4",
];

/// TLS cipher-suite constant names considered insecure: RC4 or 3DES
/// suites, and all static-RSA key exchange (no forward secrecy).
pub fn is_insecure_tls_suite(name: &str) -> bool {
    name.contains("_RC4_") || name.contains("_3DES_") || name.starts_with("TLS_RSA_WITH_")
}

/// SSH cipher names considered insecure: CBC-mode ciphers (subject to
/// plaintext-recovery attacks in SSH) and RC4 ("arcfour" family).
pub fn is_insecure_ssh_cipher(name: &str) -> bool {
    name.ends_with("-cbc") || name.starts_with("arcfour")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_predicate() {
        assert!(is_insecure_tls_suite("TLS_RSA_WITH_RC4_128_SHA"));
        assert!(is_insecure_tls_suite("TLS_ECDHE_RSA_WITH_3DES_EDE_CBC_SHA"));
        assert!(is_insecure_tls_suite("TLS_RSA_WITH_AES_128_GCM_SHA256"));
        assert!(!is_insecure_tls_suite("TLS_ECDHE_RSA_WITH_AES_128_GCM_SHA256"));
        assert!(!is_insecure_tls_suite("TLS_AES_128_GCM_SHA256"));
    }

    #[test]
    fn ssh_cipher_predicate() {
        assert!(is_insecure_ssh_cipher("aes128-cbc"));
        assert!(is_insecure_ssh_cipher("3des-cbc"));
        assert!(is_insecure_ssh_cipher("arcfour256"));
        assert!(!is_insecure_ssh_cipher("aes128-ctr"));
        assert!(!is_insecure_ssh_cipher("chacha20-poly1305@openssh.com"));
    }
}
